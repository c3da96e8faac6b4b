#include "kdiff/reference.hpp"

#include <algorithm>

#include "kdiff/error.hpp"

namespace kdiff::ref {

Values sorted(Values x) {
  std::sort(x.begin(), x.end());
  return x;
}

Values merge(const Values& x, const Values& y) {
  Values out;
  out.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

Values reversed(Values x) {
  std::reverse(x.begin(), x.end());
  return x;
}

Values zip(const Values& x, const Values& y, unsigned fy) {
  if (x.size() != y.size()) throw ShapeError("zip operands differ in length");
  Values out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] << fy) | y[i];
  return out;
}

std::pair<Values, Values> unzip(const Values& z, unsigned fy) {
  Values x(z.size()), y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    x[i] = z[i] >> fy;
    y[i] = z[i] & ((std::uint64_t(1) << fy) - 1);
  }
  return {x, y};
}

Values compact(const Values& x, const std::vector<bool>& vacant) {
  Values out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!vacant[i]) out.push_back(x[i]);
  return out;
}

Values map_sorted(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& g, const Values& x) {
  Values out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = std::lower_bound(g.begin(), g.end(), x[i],
                               [](const auto& p, std::uint64_t k) { return p.first < k; });
    if (it == g.end() || it->first != x[i]) throw DomainError("map input outside the domain");
    out[i] = it->second;
  }
  return out;
}

std::uint64_t lsmear(std::uint64_t x, unsigned f) {
  std::uint64_t m = f >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << f) - 1;
  return (x ^ (x - 1)) & m;
}

std::uint64_t reverse_bits(std::uint64_t x, unsigned f) {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < f; ++i)
    if ((x >> i) & 1) out |= std::uint64_t(1) << (f - 1 - i);
  return out;
}

std::uint64_t rsmear(std::uint64_t x, unsigned f) { return reverse_bits(lsmear(reverse_bits(x, f), f), f); }

}  // namespace kdiff::ref
