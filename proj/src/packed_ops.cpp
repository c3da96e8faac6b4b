#include "kdiff/packed_ops.hpp"

#include <algorithm>
#include <string>

#include "kdiff/error.hpp"

namespace kdiff {

PackedFn::PackedFn(unsigned kf, unsigned vf, std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs)
    : kf_(kf), vf_(vf), pairs_(kf + vf, pairs.size()) {
  if (kf + vf > 63) throw WidthError("function key plus value width exceeds 63 bits");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [k, v] = pairs[i];
    if ((k >> kf) || (v >> vf)) throw WidthError("function entry does not fit its width");
    if (i > 0 && k <= pairs[i - 1].first) throw ParamError("function keys must be strictly increasing");
    pairs_.set(i + 1, (k << vf) | v);
  }
}

bool PackedFn::contains(std::uint64_t key) const {
  std::size_t lo = 1, hi = size();
  while (lo <= hi) {
    std::size_t mid = (lo + hi) / 2;
    std::uint64_t k = this->key(mid);
    if (k == key) return true;
    if (k < key) lo = mid + 1;
    else hi = mid - 1;
  }
  return false;
}

namespace packed {

namespace {

void copy_fields(const PackedSeq& src, std::size_t sfirst, PackedSeq& dst, std::size_t dfirst, std::size_t count) {
  const unsigned chunk = 128 / (src.width() + 1);
  while (count > 0) {
    unsigned c = static_cast<unsigned>(std::min<std::size_t>(chunk, count));
    dst.store_block(dfirst, c, src.load_block(sfirst, c));
    sfirst += c;
    dfirst += c;
    count -= c;
  }
}

// entries <= z among the first cnt fields of a block
unsigned count_le(u128 block, unsigned cnt, unsigned f, std::uint64_t z) {
  if (cnt == 0) return 0;
  const unsigned w = f + 1;
  const u128 low = replicate(w, cnt);
  const u128 test = low << f;
  Reg zb = Reg(low) * Reg(u128(z));
  Reg t = ((zb | test) - block) & test;
  if (w < 64 && (u128(1) << w) <= cnt) {
    ++word_op_count;
    u128 v = t.value();
    return static_cast<unsigned>(__builtin_popcountll(static_cast<std::uint64_t>(v)) +
                                 __builtin_popcountll(static_cast<std::uint64_t>(v >> 64)));
  }
  Reg sums = (t >> f) * low;
  return static_cast<unsigned>(((sums >> ((cnt - 1) * w)) & ones(w)).value());
}

unsigned count_lt(u128 block, unsigned cnt, unsigned f, std::uint64_t z) {
  return z == 0 ? 0 : count_le(block, cnt, f, z - 1);
}

std::uint64_t field_of(u128 block, unsigned i, unsigned f) {
  return static_cast<std::uint64_t>(shr(block, i * (f + 1))) & ((std::uint64_t(1) << f) - 1);
}

void merge_into(const PackedSeq& x, std::size_t xo, std::size_t xr, const PackedSeq& y, std::size_t yo,
                std::size_t yr, PackedSeq& out, std::size_t oo, const InstructionBackend& be) {
  const unsigned f = x.width();
  const unsigned n = be.merge_block(f);
  std::size_t ix = 0, iy = 0;
  while (ix < xr && iy < yr) {
    unsigned cx = static_cast<unsigned>(std::min<std::size_t>(n, xr - ix));
    unsigned cy = static_cast<unsigned>(std::min<std::size_t>(n, yr - iy));
    u128 a = x.load_block(xo + ix, cx), b = y.load_block(yo + iy, cy);
    unsigned q = std::min(n, cx + cy);
    u128 m = be.merge(a, cx, b, cy, f);
    out.store_block(oo, q, m);
    std::uint64_t z = field_of(m, q - 1, f);
    unsigned lx = count_lt(a, cx, f, z), ly = count_lt(b, cy, f, z);
    unsigned ex = count_le(a, cx, f, z) - lx;
    unsigned ties = q - lx - ly;
    unsigned tx = lx + std::min(ties, ex);
    ix += tx;
    iy += q - tx;
    oo += q;
  }
  if (ix < xr) copy_fields(x, xo + ix, out, oo, xr - ix);
  if (iy < yr) copy_fields(y, yo + iy, out, oo, yr - iy);
}

unsigned index_width(unsigned kf, std::size_t r) {
  unsigned jw = std::max(1u, bit_width_of(r));
  if (kf >= jw && kf <= 2 * jw) jw = kf;
  return jw;
}

void check_sorted_domain(const PackedFn& g, const PackedSeq& x) {
  auto v = x.to_vector();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && v[i] < v[i - 1]) throw DomainError("map_sorted input is not sorted");
    if (!g.contains(v[i])) throw DomainError("map input " + std::to_string(v[i]) + " outside the domain");
  }
}

}  // namespace

PackedSeq slice(const PackedSeq& x, std::size_t first, std::size_t count) {
  if (first + count > x.size()) throw IndexError("slice exceeds sequence");
  PackedSeq out(x.width(), count);
  copy_fields(x, first, out, 0, count);
  return out;
}

PackedSeq zip(const PackedSeq& x, const PackedSeq& y, const InstructionBackend& be) {
  if (x.size() != y.size()) throw ShapeError("zip operands differ in length");
  const unsigned fx = x.width(), fy = y.width();
  if (fx + fy > 63) throw WidthError("zip result width " + std::to_string(fx + fy) + " exceeds 63 bits");
  PackedSeq out(fx + fy, x.size());
  const unsigned n = be.zip_block(fx, fy);
  for (std::size_t i = 0; i < x.size(); i += n) {
    unsigned c = static_cast<unsigned>(std::min<std::size_t>(n, x.size() - i));
    out.store_block(i, c, be.zip(x.load_block(i, c), fx, y.load_block(i, c), fy, c));
  }
  return out;
}

std::pair<PackedSeq, PackedSeq> unzip(const PackedSeq& z, unsigned fy, const InstructionBackend& be) {
  if (fy == 0 || fy >= z.width()) throw WidthError("unzip split width out of range");
  const unsigned fx = z.width() - fy;
  PackedSeq x(fx, z.size()), y(fy, z.size());
  const unsigned n = be.unzip_block(fx, fy);
  for (std::size_t i = 0; i < z.size(); i += n) {
    unsigned c = static_cast<unsigned>(std::min<std::size_t>(n, z.size() - i));
    auto [a, b] = be.unzip(z.load_block(i, c), fx, fy, c);
    x.store_block(i, c, a);
    y.store_block(i, c, b);
  }
  return {std::move(x), std::move(y)};
}

PackedSeq merge(const PackedSeq& x, const PackedSeq& y, const InstructionBackend& be) {
  if (x.width() != y.width()) throw ShapeError("merge operands differ in width");
  PackedSeq out(x.width(), x.size() + y.size());
  merge_into(x, 0, x.size(), y, 0, y.size(), out, 0, be);
  return out;
}

PackedSeq sort(const PackedSeq& x, const InstructionBackend& be) {
  const unsigned f = x.width();
  const std::size_t r = x.size();
  PackedSeq cur = x;
  const unsigned n = be.sort_block(f);
  for (std::size_t i = 0; i < r; i += n) {
    unsigned c = static_cast<unsigned>(std::min<std::size_t>(n, r - i));
    cur.store_block(i, c, be.sort(cur.load_block(i, c), c, f));
  }
  for (std::size_t run = n; run < r; run *= 2) {
    PackedSeq next(f, r);
    for (std::size_t a = 0; a < r; a += 2 * run) {
      if (a + run >= r) {
        copy_fields(cur, a, next, a, r - a);
      } else {
        std::size_t rb = std::min(run, r - a - run);
        merge_into(cur, a, run, cur, a + run, rb, next, a, be);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

PackedSeq map_sorted(const PackedFn& g, const PackedSeq& x, const InstructionBackend& be, bool validate) {
  const unsigned kf = g.key_width(), vf = g.value_width();
  if (x.width() != kf) throw ShapeError("map input width differs from the function key width");
  if (validate) check_sorted_domain(g, x);
  const std::size_t r = x.size();
  PackedSeq out(vf, r);
  if (r == 0) return out;
  if (g.size() == 0) throw DomainError("map over an empty function");
  const unsigned blk = be.map_block(kf, vf);
  std::size_t gi = 0, xi = 0;
  while (xi < r && gi < g.size()) {
    unsigned gc = static_cast<unsigned>(std::min<std::size_t>(blk, g.size() - gi));
    std::uint64_t gmax = g.key(gi + gc);
    std::size_t xj = xi;
    while (xj < r) {
      unsigned c = static_cast<unsigned>(std::min<std::size_t>(blk, r - xj));
      u128 xb = x.load_block(xj, c);
      unsigned take = count_le(xb, c, kf, gmax);
      xj += take;
      if (take < c) break;
    }
    if (xj > xi) {
      u128 gb = g.pairs().load_block(gi, gc);
      for (std::size_t a = xi; a < xj; a += blk) {
        unsigned c = static_cast<unsigned>(std::min<std::size_t>(blk, xj - a));
        out.store_block(a, c, be.map_sorted(gb, gc, x.load_block(a, c), c, kf, vf));
      }
    }
    xi = xj;
    gi += gc;
  }
  if (xi < r) throw DomainError("map input outside the domain");
  return out;
}

std::vector<PackedSeq> map_many(std::span<const PackedFn* const> gs, const PackedSeq& x,
                                const InstructionBackend& be, bool validate) {
  std::vector<PackedSeq> out;
  if (gs.empty()) return out;
  const unsigned kf = gs[0]->key_width();
  if (x.width() != kf) throw ShapeError("map input width differs from the function key width");
  const std::size_t r = x.size();
  if (r == 0) {
    for (const PackedFn* g : gs) out.emplace_back(g->value_width(), 0);
    return out;
  }
  const unsigned jw = index_width(kf, r);
  PackedSeq j = iota(jw, r);
  PackedSeq z = sort(zip(x, j, be), be);
  auto [z1, z2] = unzip(z, jw, be);
  for (const PackedFn* g : gs) {
    if (g->key_width() != kf) throw ShapeError("functions in map_many differ in key width");
    PackedSeq a = map_sorted(*g, z1, be, validate);
    PackedSeq back = sort(zip(z2, a, be), be);
    out.push_back(unzip(back, g->value_width(), be).second);
  }
  return out;
}

PackedSeq map(const PackedFn& g, const PackedSeq& x, const InstructionBackend& be, bool validate) {
  const PackedFn* one[] = {&g};
  return std::move(map_many(one, x, be, validate)[0]);
}

LabelSeq lnca_seq(const LabelSeq& x, const LabelSeq& y, const InstructionBackend& be) {
  if (x.size() != y.size() || x.width() != y.width()) throw ShapeError("label sequences differ in shape");
  const unsigned c = x.width();
  const std::size_t r = x.size();
  LabelSeq out{PackedSeq(c, r), PackedSeq(c, r), PackedSeq(c, r)};
  const unsigned n = be.lnca_block(c);
  for (std::size_t i = 0; i < r; i += n) {
    unsigned k = static_cast<unsigned>(std::min<std::size_t>(n, r - i));
    instr::Label3 a{x.p.load_block(i, k), x.b.load_block(i, k), x.l.load_block(i, k)};
    instr::Label3 b{y.p.load_block(i, k), y.b.load_block(i, k), y.l.load_block(i, k)};
    instr::Label3 res = be.lnca(a, b, k, c);
    out.p.store_block(i, k, res.p);
    out.b.store_block(i, k, res.b);
    out.l.store_block(i, k, res.l);
  }
  return out;
}

}  // namespace packed

}  // namespace kdiff
