#include "kdiff/labeling.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "kdiff/error.hpp"
#include "kdiff/word.hpp"

namespace kdiff {

namespace {

struct Bits {
  std::vector<bool> p;
  std::vector<unsigned> starts;  // 0-based part starts
  std::vector<bool> light;       // per part
};

// shortest binary string s with [0.s, 0.s + 2^-|s|) inside [a/W, (a+w)/W)
std::vector<bool> dyadic_code(std::uint64_t a, std::uint64_t w, std::uint64_t total) {
  for (unsigned len = 0; len < 64; ++len) {
    u128 num = u128(a) << len;
    u128 q = (num + total - 1) / total;
    if ((q + 1) * total <= (u128(a + w) << len)) {
      std::vector<bool> code(len);
      for (unsigned i = 0; i < len; ++i) code[i] = (q >> (len - 1 - i)) & 1;
      return code;
    }
  }
  throw WidthError("code interval too small");
}

void append_part(Bits& s, const std::vector<bool>& code, bool light) {
  s.starts.push_back(static_cast<unsigned>(s.p.size()));
  s.light.push_back(light);
  s.p.insert(s.p.end(), code.begin(), code.end());
  s.p.push_back(true);
}

std::atomic<std::uint64_t> next_token{1};

struct View {
  unsigned c;
  bool bit(std::uint64_t v, unsigned pos) const { return pos <= c && ((v >> (c - pos)) & 1); }  // pos 1-based
  std::uint64_t one(unsigned pos) const { return std::uint64_t(1) << (c - pos); }
};

}  // namespace

NcaLabeling NcaLabeling::build(const Tree& t, unsigned min_width) {
  const std::size_t n = t.size();
  NcaLabeling out;
  out.token_ = next_token++;
  if (n == 0) return out;

  std::vector<int> order{t.root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : t.children[order[i]]) order.push_back(c);
  std::vector<std::uint64_t> size(n, 1);
  for (std::size_t i = order.size(); i-- > 1;) size[t.parent[order[i]]] += size[order[i]];
  std::vector<int> heavy(n, -1);
  for (std::size_t v = 0; v < n; ++v)
    for (int c : t.children[v])
      if (heavy[v] < 0 || size[c] > size[heavy[v]]) heavy[v] = c;

  // heavy part codes by depth on the path; light part codes among siblings by size
  std::vector<std::vector<bool>> hcode(n), lcode(n);
  for (int v : order) {
    bool top = v == t.root || heavy[t.parent[v]] != v;
    if (top) {
      std::vector<int> path;
      for (int x = v; x >= 0; x = heavy[x]) path.push_back(x);
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < path.size(); ++j) {
        std::uint64_t w = size[path[j]] - (j + 1 < path.size() ? size[path[j + 1]] : 0);
        hcode[path[j]] = dyadic_code(acc, w, size[v]);
        acc += w;
      }
    }
    std::uint64_t total = 0;
    for (int c : t.children[v])
      if (c != heavy[v]) total += size[c];
    std::uint64_t acc = 0;
    for (int c : t.children[v]) {
      if (c == heavy[v]) continue;
      lcode[c] = dyadic_code(acc, size[c], total);
      acc += size[c];
    }
  }

  // base(v): label string of v without its final heavy part
  std::vector<Bits> base(n), full(n);
  for (int v : order) {
    if (v == t.root) {
      base[v] = Bits{};
    } else if (heavy[t.parent[v]] == v) {
      base[v] = base[t.parent[v]];
    } else {
      base[v] = full[t.parent[v]];
      append_part(base[v], lcode[v], true);
    }
    full[v] = base[v];
    append_part(full[v], hcode[v], false);
  }
  for (auto& b : base) b = Bits{};

  unsigned maxlen = 0;
  for (const auto& s : full) maxlen = std::max<unsigned>(maxlen, static_cast<unsigned>(s.p.size()));
  out.max_len_ = maxlen;
  out.c_ = std::max(maxlen + 1, min_width);
  if (out.c_ > 63)
    throw WidthError("label width " + std::to_string(out.c_) + " exceeds 63 bits");
  View vw{out.c_};
  out.labels_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const Bits& s = full[v];
    Label lab;
    for (std::size_t i = 0; i < s.p.size(); ++i)
      if (s.p[i]) lab.p |= vw.one(static_cast<unsigned>(i + 1));
    for (std::size_t j = 0; j < s.starts.size(); ++j) {
      lab.b |= vw.one(s.starts[j] + 1);
      if (s.light[j]) lab.l |= vw.one(s.starts[j] + 1);
    }
    lab.b |= vw.one(static_cast<unsigned>(s.p.size() + 1));
    out.labels_[v] = lab;
    out.by_p_.emplace(lab.p, static_cast<int>(v));
  }
  if (out.by_p_.size() != n) throw Error("labeling produced duplicate p sublabels");
  return out;
}

int NcaLabeling::node_of(std::uint64_t p) const {
  auto it = by_p_.find(p);
  return it == by_p_.end() ? -1 : it->second;
}

Label lnca_scalar(const NcaLabeling& lab, const Label& x, const Label& y, bool validate) {
  if (validate && (lab.node_of(x.p) < 0 || lab.node_of(y.p) < 0 || lab.label(lab.node_of(x.p)) != x ||
                   lab.label(lab.node_of(y.p)) != y))
    throw ParamError("label does not belong to this labeling");
  if (x.p == y.p) return x;
  const unsigned c = lab.width();
  View vw{c};
  unsigned d = 1;
  while (vw.bit(x.p, d) == vw.bit(y.p, d)) ++d;
  unsigned u = d;
  while (!vw.bit(x.b, u)) --u;
  auto keep_before = [&](std::uint64_t v, unsigned pos) {  // positions < pos
    std::uint64_t out = 0;
    for (unsigned i = 1; i < pos; ++i)
      if (vw.bit(v, i)) out |= vw.one(i);
    return out;
  };
  Label r;
  r.p = keep_before(x.p, u);
  r.b = keep_before(x.b, u) | vw.one(u);
  r.l = keep_before(x.l, u);
  bool light = vw.bit(x.l, u) || vw.bit(y.l, u);
  if (light) return r;

  auto part = [&](const Label& z, unsigned& end) {
    end = u + 1;
    while (!vw.bit(z.b, end)) ++end;
    std::uint64_t bits = 0;
    for (unsigned i = u; i < end; ++i)
      if (vw.bit(z.p, i)) bits |= vw.one(i);
    return bits;
  };
  unsigned ex = 0, ey = 0;
  std::uint64_t px = part(x, ex), py = part(y, ey);
  bool take_x = px <= py;
  r.p |= take_x ? px : py;
  r.b |= vw.one(take_x ? ex : ey);
  return r;
}

}  // namespace kdiff
