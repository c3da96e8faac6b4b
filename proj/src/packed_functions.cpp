#include "kdiff/packed_functions.hpp"

#include <algorithm>
#include <string>

#include "kdiff/error.hpp"

namespace kdiff {

namespace {

std::size_t band_size(std::size_t m, std::size_t n_hat, unsigned k) { return n_hat + 2 * k + 3 - m; }

}  // namespace

unsigned required_pos_width(std::size_t m, std::size_t n_hat, unsigned k) {
  std::size_t r = band_size(m, n_hat, k);
  // Z + J before the diagonal offset, and the clamp bound n_hat + k + 3
  std::size_t top = std::max({m + 2 + r, n_hat + k + 3, m + 2});
  return bit_width_of(top);
}

PackedFnSet build_packed_functions(const GenSuffixTree& tree, const NcaLabeling& lab, std::size_t m,
                                   std::size_t n_hat, unsigned k, unsigned pos_width) {
  if (m == 0 || k >= m || n_hat + k < m) throw ParamError("chunk too short for the diagonal band");
  if (tree.pattern_length() != m || tree.text_length() != n_hat) throw ShapeError("tree does not match m, n_hat");
  const unsigned need = required_pos_width(m, n_hat, k);
  if (pos_width == 0) pos_width = need;
  if (pos_width < need)
    throw WidthError("position width " + std::to_string(pos_width) + " too small: Z + J reaches " +
                     std::to_string(m + 2 + band_size(m, n_hat, k)) + ", needs " + std::to_string(need) + " bits");
  const unsigned c = lab.width();
  if (map_record_width(pos_width, c, 1) > 64)
    throw WidthError("label width " + std::to_string(c) + " too large for position width " + std::to_string(pos_width));

  PackedFnSet out;
  out.pos_width = pos_width;
  out.label_width = c;
  out.m = m;
  out.n_hat = n_hat;
  out.k = k;
  out.r = band_size(m, n_hat, k);

  auto leaf_fns = [&](std::size_t count, auto leaf_of) {
    std::array<std::vector<std::pair<std::uint64_t, std::uint64_t>>, 3> pairs;
    for (std::size_t i = 1; i <= count; ++i) {
      const Label& l = lab.label(leaf_of(i));
      pairs[0].emplace_back(i, l.p);
      pairs[1].emplace_back(i, l.b);
      pairs[2].emplace_back(i, l.l);
    }
    return std::array<PackedFn, 3>{PackedFn(pos_width, c, pairs[0]), PackedFn(pos_width, c, pairs[1]),
                                   PackedFn(pos_width, c, pairs[2])};
  };
  out.np = leaf_fns(m + 1, [&](std::size_t i) { return tree.leaf_p(i); });
  out.nq = leaf_fns(n_hat + 1, [&](std::size_t j) { return tree.leaf_q(j); });

  std::vector<std::pair<std::uint64_t, std::uint64_t>> dp;
  for (std::size_t v = 0; v < tree.node_count(); ++v)
    dp.emplace_back(lab.label(static_cast<int>(v)).p, tree.strdepth(static_cast<int>(v)));
  std::sort(dp.begin(), dp.end());
  out.depth = PackedFn(c, pos_width, dp);

  out.ones = broadcast(pos_width, out.r, 1);
  out.pattern_end = broadcast(pos_width, out.r, m + 1);
  out.index = iota(pos_width, out.r);
  return out;
}

}  // namespace kdiff
