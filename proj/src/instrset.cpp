#include "kdiff/instrset.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "kdiff/error.hpp"

namespace kdiff {

namespace {

void require_fit(unsigned fields, unsigned stride, const char* what) {
  if (static_cast<unsigned long>(fields) * stride > 128)
    throw WidthError(std::string(what) + ": " + std::to_string(fields) + " fields of " + std::to_string(stride) +
                     " bits exceed the register");
}

// Mask tables for repacking and bit reversal, built once per geometry per thread.
using MaskList = std::vector<u128>;

const MaskList& cached(std::uint64_t key, MaskList (*make)(unsigned, unsigned, unsigned), unsigned a, unsigned b,
                       unsigned c) {
  thread_local std::unordered_map<std::uint64_t, MaskList> cache;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  return cache.emplace(key, make(a, b, c)).first->second;
}

std::uint64_t geo_key(unsigned kind, unsigned a, unsigned b, unsigned c) {
  return (std::uint64_t(kind) << 48) | (std::uint64_t(a) << 32) | (std::uint64_t(b) << 16) | c;
}

unsigned steps_for(unsigned n) { return n <= 1 ? 0 : bit_width_of(n - 1); }

// position of field i after the low k index bits have been squeezed
unsigned squeeze_pos(unsigned i, unsigned k, unsigned from, unsigned to) {
  unsigned delta = from - to;
  return i * from - (i & ((1u << k) - 1)) * delta;
}

MaskList make_narrow(unsigned n, unsigned from, unsigned to) {
  MaskList out;
  for (unsigned k = 0; k < steps_for(n); ++k) {
    u128 m = 0;
    for (unsigned i = 0; i < n; ++i)
      if ((i >> k) & 1) m |= shl(ones(to), squeeze_pos(i, k, from, to));
    out.push_back(m);
  }
  return out;
}

MaskList make_widen(unsigned n, unsigned from, unsigned to) {
  // widen step k undoes narrow step k of the (to -> from) repack
  MaskList out;
  for (unsigned k = 0; k < steps_for(n); ++k) {
    u128 m = 0;
    for (unsigned i = 0; i < n; ++i)
      if ((i >> k) & 1) m |= shl(ones(from), squeeze_pos(i, k + 1, to, from));
    out.push_back(m);
  }
  return out;
}

// per level: top-half mask, bottom-half mask, shift; for one field of width f
MaskList make_revbits(unsigned f, unsigned, unsigned) {
  MaskList out;
  std::vector<unsigned> offsets{0};
  unsigned len = f;
  while (len >= 2) {
    unsigned h = len / 2;
    u128 top = 0, bot = 0;
    std::vector<unsigned> next;
    for (unsigned o : offsets) {
      bot |= shl(ones(h), o);
      top |= shl(ones(h), o + len - h);
      next.push_back(o);
      next.push_back(o + len - h);
    }
    out.push_back(top);
    out.push_back(bot);
    out.push_back(len - h);
    offsets = std::move(next);
    len = h;
  }
  return out;
}

Reg pad_fields(Reg x, unsigned from, unsigned to, unsigned stride, unsigned width) {
  if (to <= from) return x;
  return x | field_pattern(stride, to - from, width, from * stride);
}

// ascending bitonic merge of n = power-of-two fields, starting at half-block h
Reg bitonic_levels(Reg x, unsigned n, unsigned f, unsigned h_top) {
  const unsigned w = f + 1;
  const u128 test_all = field_pattern(w, n, 1, f);
  for (unsigned h = h_top; h >= 1; h /= 2) {
    const u128 lo = field_pattern(2 * h * w, n / (2 * h), h * w);
    const u128 lo_entry = lo & ~test_all;
    const u128 lo_test = lo & test_all;
    Reg a = x & lo;
    Reg b = (x >> (h * w)) & lo;
    Reg t = ((a | lo_test) - b) & lo_test;  // a >= b
    Reg tm = t - (t >> f);
    Reg inv = tm ^ lo_entry;
    Reg mx = (a & tm) | (b & inv);
    Reg mn = (b & tm) | (a & inv);
    x = mn | (mx << (h * w));
  }
  return x;
}

Reg reverse_within(Reg x, unsigned n, unsigned f, unsigned block) {
  const unsigned w = f + 1;
  for (unsigned h = block / 2; h >= 1; h /= 2) {
    const u128 lo = field_pattern(2 * h * w, n / (2 * h), h * w);
    x = ((x & lo) << (h * w)) | ((x >> (h * w)) & lo);
  }
  return x;
}

// compaction with the entry width e: vacant fields marked by bit e
Reg compact_impl(Reg x, unsigned n, unsigned e) {
  const unsigned w = e + 1;
  const u128 low = replicate(w, n);
  const u128 entries = field_pattern(w, n, e);
  const u128 full = ones(w);
  Reg v = (x >> e) & low;
  Reg vac_full = v * full;
  Reg occ = ~vac_full & entries;
  x = x & occ;
  Reg p = (v * low) & occ;
  for (unsigned b = 0; (1u << b) < n; ++b) {
    Reg sel = (p >> b) & low;
    Reg s = sel * full;
    Reg keep = ~s;
    unsigned dist = (1u << b) * w;
    x = (x & keep) | ((x & s) >> dist);
    p = (p & keep) | ((p & s) >> dist);
  }
  return x;
}

Reg lsmear_impl(Reg x, unsigned n, unsigned f) {
  const unsigned w = f + 1;
  const u128 low = replicate(w, n);
  const u128 test = low << f;
  Reg xh = x | test;
  return ((xh - low) ^ xh) & (test - low);
}

Reg revbits_impl(Reg x, unsigned n, unsigned f) {
  const MaskList& lv = cached(geo_key(3, f, 0, 0), make_revbits, f, 0, 0);
  const u128 rep = replicate(f + 1, n);
  for (std::size_t i = 0; i < lv.size(); i += 3) {
    u128 top = lv[i] * rep, bot = lv[i + 1] * rep;
    unsigned sh = static_cast<unsigned>(lv[i + 2]);
    x = (x & ~u128(top | bot)) | ((x & top) >> sh) | ((x & bot) << sh);
  }
  return x;
}

Reg rsmear_impl(Reg x, unsigned n, unsigned f) {
  return revbits_impl(lsmear_impl(revbits_impl(x, n, f), n, f), n, f);
}

Reg narrow_impl(Reg x, unsigned n, unsigned from, unsigned to) {
  if (from == to || n <= 1) return x;
  const MaskList& m = cached(geo_key(1, n, from, to), make_narrow, n, from, to);
  for (unsigned k = 0; k < m.size(); ++k) {
    unsigned dist = (1u << k) * (from - to);
    x = (x & ~m[k]) | ((x & m[k]) >> dist);
  }
  return x;
}

Reg widen_impl(Reg x, unsigned n, unsigned from, unsigned to) {
  if (from == to || n <= 1) return x;
  const MaskList& m = cached(geo_key(2, n, from, to), make_widen, n, from, to);
  for (unsigned k = static_cast<unsigned>(m.size()); k-- > 0;) {
    unsigned dist = (1u << k) * (to - from);
    x = (x & ~m[k]) | ((x & m[k]) << dist);
  }
  return x;
}

// exchange field ranges [h/2, h) and [h, 3h/2) inside every block of 2h fields
Reg half_swap(Reg z, unsigned total, unsigned w, unsigned h) {
  const unsigned q = h / 2;
  const u128 m1 = field_pattern(2 * h * w, total / (2 * h), q * w, q * w);
  const u128 m2 = shl(m1, q * w);
  return (z & ~u128(m1 | m2)) | ((z & m1) << (q * w)) | ((z & m2) >> (q * w));
}

Reg nonzero_mask(Reg v, u128 low, u128 test, unsigned f) {
  Reg t = ((v | test) - low) & test;
  return t - (t >> f);
}

}  // namespace

namespace instr {

u128 reverse(u128 x, unsigned n, unsigned f) {
  require_fit(ceil_pow2(n), f + 1, "reverse");
  unsigned p = ceil_pow2(n);
  Reg r = reverse_within(x, p, f, p);
  // padding fields land at the bottom when n < p
  return (r >> ((p - n) * (f + 1))).value();
}

u128 bitonic_sort(u128 x, unsigned n, unsigned f) {
  require_fit(n, f + 1, "bitonic_sort");
  if (n < 2) return x;
  return bitonic_levels(x, n, f, n / 2).value();
}

u128 merge(u128 x, unsigned nx, u128 y, unsigned ny, unsigned f) {
  const unsigned w = f + 1;
  const unsigned p = ceil_pow2(std::max(nx, ny));
  require_fit(2 * p, w, "merge");
  Reg a = pad_fields(x, nx, p, w, f);
  Reg b = pad_fields(y, ny, p, w, f);
  Reg z = a | (Reg(reverse_within(b, p, f, p)) << (p * w));
  z = bitonic_levels(z, 2 * p, f, p);
  return (z & ones((nx + ny) * w)).value();
}

u128 sort(u128 x, unsigned n, unsigned f) {
  const unsigned w = f + 1;
  const unsigned p = ceil_pow2(n);
  require_fit(p, w, "sort");
  if (n < 2) return x;
  Reg z = pad_fields(x, n, p, w, f);
  for (unsigned len = 1; len < p; len *= 2) {
    const u128 lower = field_pattern(2 * len * w, p / (2 * len), len * w);
    const u128 upper = shl(lower, len * w);
    Reg rev = reverse_within(z, p, f, len);
    z = (z & lower) | (rev & upper);
    z = bitonic_levels(z, p, f, len);
  }
  return (z & ones(n * w)).value();
}

u128 compact(u128 x, unsigned n, unsigned f) {
  require_fit(n, f + 1, "compact");
  if ((std::uint64_t(1) << f) <= n) throw WidthError("compact needs f >= ceil(log2(n+1))");
  return compact_impl(x, n, f).value();
}

u128 narrow(u128 x, unsigned n, unsigned from, unsigned to) {
  if (to > from) throw WidthError("narrow target wider than source");
  require_fit(n, from, "narrow");
  return narrow_impl(x, n, from, to).value();
}

u128 widen(u128 x, unsigned n, unsigned from, unsigned to) {
  if (to < from) throw WidthError("widen target narrower than source");
  require_fit(n, to, "widen");
  return widen_impl(x, n, from, to).value();
}

u128 zip(u128 x, unsigned fx, u128 y, unsigned fy, unsigned n) {
  const unsigned fm = std::max(fx, fy);
  const unsigned w = fm + 1;
  const unsigned p = ceil_pow2(n);
  require_fit(2 * p, w, "zip");
  if (fx + fy > 127) throw WidthError("zip result width too large");
  Reg a = widen_impl(x & ones(n * (fx + 1)), p, fx + 1, w);
  Reg b = widen_impl(y & ones(n * (fy + 1)), p, fy + 1, w);
  Reg z = b | (a << (p * w));
  for (unsigned h = p; h >= 2; h /= 2) z = half_swap(z, 2 * p, w, h);
  const u128 odd = field_pattern(2 * w, p, w, w);
  z = (z & ~odd) | ((z & odd) >> (w - fy));
  z = narrow_impl(z, p, 2 * w, fx + fy + 1);
  return (z & ones(n * (fx + fy + 1))).value();
}

std::pair<u128, u128> unzip(u128 zin, unsigned fx, unsigned fy, unsigned n) {
  const unsigned fm = std::max(fx, fy);
  const unsigned w = fm + 1;
  const unsigned p = ceil_pow2(n);
  require_fit(2 * p, w, "unzip");
  Reg z = widen_impl(zin & ones(n * (fx + fy + 1)), p, fx + fy + 1, 2 * w);
  const u128 ymask = field_pattern(2 * w, p, fy);
  const u128 xmask = field_pattern(2 * w, p, fx, fy);
  z = (z & ymask) | ((z & xmask) << (w - fy));
  for (unsigned h = 2; h <= p; h *= 2) z = half_swap(z, 2 * p, w, h);
  Reg y = z & ones(p * w);
  Reg x = z >> (p * w);
  x = narrow_impl(x, p, w, fx + 1);
  y = narrow_impl(y, p, w, fy + 1);
  return {(x & ones(n * (fx + 1))).value(), (y & ones(n * (fy + 1))).value()};
}

u128 lsmear(u128 x, unsigned n, unsigned f) {
  require_fit(n, f + 1, "lsmear");
  return lsmear_impl(x, n, f).value();
}

u128 reverse_bits(u128 x, unsigned n, unsigned f) {
  require_fit(n, f + 1, "reverse_bits");
  return revbits_impl(x, n, f).value();
}

u128 rsmear(u128 x, unsigned n, unsigned f) {
  require_fit(n, f + 1, "rsmear");
  return rsmear_impl(x, n, f).value();
}

}  // namespace instr

unsigned map_record_width(unsigned kf, unsigned vf, unsigned padded) {
  unsigned key = std::max(kf, bit_width_of(2 * padded));
  return key + vf + 2;
}

namespace instr {

u128 map_sorted(u128 g, unsigned u, u128 x, unsigned n, unsigned kf, unsigned vf) {
  if (n == 0) return 0;
  if (u == 0) throw DomainError("map_sorted with an empty function block");
  const unsigned p = ceil_pow2(std::max(u, n));
  const unsigned kw = std::max(kf, bit_width_of(2 * p));
  const unsigned e = kw + 1 + vf;  // record entry: key | origin | value
  const unsigned w = e + 1;
  const unsigned n2 = 2 * p;
  require_fit(n2, w, "map_sorted");
  const unsigned vsh = vf + 1;  // key subfield offset

  Reg xr = widen_impl(x & ones(n * (kf + 1)), p, kf + 1, w) << vsh;
  xr = pad_fields(xr, n, p, w, e);
  Reg gw = widen_impl(g & ones(u * (kf + vf + 1)), p, kf + vf + 1, w);
  Reg gr = (gw & field_pattern(w, u, vf)) | ((gw & field_pattern(w, u, kf, vf)) << 1) |
           field_pattern(w, u, 1, vf);
  gr = pad_fields(gr, u, p, w, e);

  // merge: X ascending low, G reversed high, then bitonic sort
  Reg m = xr | (reverse_within(gr, p, e, p) << (p * w));
  m = bitonic_levels(m, n2, e, p);

  // a G record with no X record in front of it carries no chain
  const u128 obits = field_pattern(w, n2, 1, vf);
  Reg o = m & obits;
  Reg oprev = (o << w) | (u128(1) << vf);
  Reg vac = o & oprev;
  m = m | (vac << (e - vf));
  m = compact_impl(m, n2, e);

  // field indices into the key subfield, then keep only G records
  u128 idx = 0;
  for (unsigned j = 0; j < n2; ++j) idx |= shl(u128(j + 1), j * w + vsh);
  const u128 keys = field_pattern(w, n2, kw, vsh);
  m = (m & ~keys) | idx;
  Reg vac2 = ~(m & obits) & obits;
  m = m | (vac2 << (e - vf));
  Reg s = compact_impl(m, n2, e);

  // chain j has (e_j - e_{j-1} - 1) X records
  const u128 low = replicate(w, n2);
  const u128 keylow = field_pattern(w, n2, kw);
  Reg valid = (s & obits) >> vf;
  Reg valid_full = valid * ones(w);
  Reg ki = (s >> vsh) & keylow;
  Reg kp = (ki << w) & valid_full;
  Reg rem = ki - kp - valid - valid;  // count - 1
  Reg vals = s & field_pattern(w, n2, vf);
  Reg dist = rem * low - rem;  // exclusive prefix sum of rem
  Reg rec = vals | (rem << vsh);

  // spread records to their chain starts, high distance bits first
  for (unsigned b = bit_width_of(n2); b-- > 0;) {
    Reg sel = (dist >> b) & low;
    Reg sm = sel * ones(w);
    Reg keep = ~sm;
    unsigned d = (1u << b) * w;
    rec = (rec & keep) | ((rec & sm) << d);
    dist = (dist & keep) | ((dist & sm) << d);
  }

  // replicate each record over its chain by doubling
  const u128 guard = low << kw;
  for (unsigned t = 0; (1u << t) < n; ++t) {
    const u128 ct = low * (u128(1) << t);
    Reg kr = (rec >> vsh) & keylow;
    Reg tt = ((kr | guard) - ct) & guard;
    Reg sm = (tt >> kw) * ones(w);
    Reg copies = (rec & sm) - (shl(ct, vsh) & sm);
    rec = rec | (copies << ((1u << t) * w));
  }

  Reg out = rec & field_pattern(w, n, vf);
  return (narrow_impl(out, n, w, vf + 1) & ones(n * (vf + 1))).value();
}

Label3 lnca(const Label3& x, const Label3& y, unsigned n, unsigned c) {
  require_fit(n, c + 1, "lnca");
  const unsigned w = c + 1;
  const u128 low = replicate(w, n);
  const u128 test = low << c;
  const u128 ent = test - low;
  Reg xp = x.p, xb = x.b, xl = x.l, yp = y.p, yb = y.b, yl = y.l;

  Reg d = xp ^ yp;
  Reg same = ent & ~nonzero_mask(d, low, test, c);
  Reg z = rsmear_impl(d, n, c);  // string positions up to the first difference
  Reg y1 = xb & z;
  Reg ubit = lsmear_impl(y1, n, c) & y1;  // start of the part holding the first difference
  Reg um = lsmear_impl(ubit, n, c);       // string positions from that start on
  Reg below = (um >> 1) & ent;
  Reg lcpp = xp & ~um & ent;

  auto part_end = [&](Reg bounds) {
    Reg nx = bounds & below;
    Reg nzm = nonzero_mask(nx, low, test, c);
    Reg rs = rsmear_impl(nx, n, c) & nzm;
    Reg span = um & (rs << 1) & ent;
    Reg endbit = rs & ~(rs << 1);
    return std::pair<Reg, Reg>{span, endbit};
  };
  auto [lx, ex] = part_end(xb);
  auto [ly, ey] = part_end(yb);
  Reg px = xp & lx;
  Reg py = yp & ly;
  Reg tx = ((py | test) - px) & test;
  Reg txm = tx - (tx >> c);
  Reg tym = txm ^ ent;
  Reg mn = (px & txm) | (py & tym);
  Reg endmin = (ex & txm) | (ey & tym);
  Reg light = nonzero_mask((xl | yl) & ubit, low, test, c);
  Reg heavy = light ^ ent;

  Reg rp = lcpp | (mn & heavy);
  Reg rb = (xb & ~below & ent) | (endmin & heavy);
  Reg rl = xl & ~um & ent;
  Reg diff = same ^ ent;
  Label3 out;
  out.p = ((xp & same) | (rp & diff)).value();
  out.b = ((xb & same) | (rb & diff)).value();
  out.l = ((xl & same) | (rl & diff)).value();
  return out;
}

}  // namespace instr

unsigned InstructionBackend::sort_block(unsigned f) const { return floor_pow2(64 / (f + 1)); }
unsigned InstructionBackend::merge_block(unsigned f) const { return floor_pow2(64 / (f + 1)); }
unsigned InstructionBackend::zip_block(unsigned fx, unsigned fy) const {
  return floor_pow2(64 / (std::max(fx, fy) + 1));
}
unsigned InstructionBackend::map_block(unsigned kf, unsigned vf) const {
  for (unsigned p = 64; p >= 1; p /= 2)
    if (p * map_record_width(kf, vf, p) <= 64) return p;
  throw WidthError("map_sorted record of key width " + std::to_string(kf) + " and value width " +
                   std::to_string(vf) + " does not fit a word");
}
unsigned InstructionBackend::lnca_block(unsigned c) const {
  if (c + 1 > 64) throw WidthError("label width does not fit a word");
  return 64 / (c + 1);
}

u128 WordParallelBackend::sort(u128 x, unsigned n, unsigned f) const { return instr::sort(x, n, f); }
u128 WordParallelBackend::merge(u128 x, unsigned nx, u128 y, unsigned ny, unsigned f) const {
  return instr::merge(x, nx, y, ny, f);
}
u128 WordParallelBackend::zip(u128 x, unsigned fx, u128 y, unsigned fy, unsigned n) const {
  return instr::zip(x, fx, y, fy, n);
}
std::pair<u128, u128> WordParallelBackend::unzip(u128 z, unsigned fx, unsigned fy, unsigned n) const {
  return instr::unzip(z, fx, fy, n);
}
u128 WordParallelBackend::map_sorted(u128 g, unsigned u, u128 x, unsigned n, unsigned kf, unsigned vf) const {
  return instr::map_sorted(g, u, x, n, kf, vf);
}
instr::Label3 WordParallelBackend::lnca(const instr::Label3& x, const instr::Label3& y, unsigned n,
                                        unsigned c) const {
  return instr::lnca(x, y, n, c);
}

const WordParallelBackend& wordpar_backend() {
  static const WordParallelBackend b;
  return b;
}

}  // namespace kdiff
