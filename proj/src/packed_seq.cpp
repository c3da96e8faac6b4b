#include "kdiff/packed_seq.hpp"

#include <array>
#include <bit>
#include <string>

#include "kdiff/error.hpp"

namespace kdiff {

namespace {

std::array<Layout, 64> make_layouts() {
  std::array<Layout, 64> out{};
  for (unsigned f = 1; f < 64; ++f) {
    Layout& l = out[f];
    l.f = f;
    l.field = f + 1;
    l.s = 64 / (f + 1);
    for (unsigned j = 0; j < l.s; ++j) {
      l.low |= std::uint64_t(1) << (j * l.field);
      l.test |= std::uint64_t(1) << (j * l.field + f);
      l.entry |= ((std::uint64_t(1) << f) - 1) << (j * l.field);
    }
  }
  return out;
}


void check_same_shape(const PackedSeq& x, const PackedSeq& y) {
  if (x.width() != y.width() || x.size() != y.size())
    throw ShapeError("packed sequences differ in width or length");
}

// fields of word w that belong to the sequence
std::uint64_t used_fields(const Layout& l, std::size_t r, std::size_t w) {
  std::size_t first = w * l.s;
  std::size_t n = r > first ? r - first : 0;
  if (n >= l.s) return ~std::uint64_t(0);
  return n == 0 ? 0 : (std::uint64_t(1) << (n * l.field)) - 1;
}

}  // namespace

namespace detail {
const std::array<Layout, 64> layouts = make_layouts();
void bad_width(unsigned f) { throw WidthError("field width " + std::to_string(f) + " outside [1,63]"); }
}  // namespace detail

PackedSeq::PackedSeq(unsigned f, std::size_t r) : f_(f), r_(r) {
  const Layout& l = layout(f);
  words_.assign((r + l.s - 1) / l.s, 0);
}

PackedSeq PackedSeq::build(unsigned f, std::span<const std::uint64_t> values) {
  PackedSeq out(f, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.set(i + 1, values[i]);
  return out;
}

PackedSeq PackedSeq::from_words(unsigned f, std::size_t r, std::vector<std::uint64_t> words) {
  PackedSeq out(f, r);
  if (words.size() != out.words_.size()) throw ShapeError("word count does not match length");
  const Layout& l = layout(f);
  for (std::size_t w = 0; w < words.size(); ++w) words[w] &= l.entry & used_fields(l, r, w);
  out.words_ = std::move(words);
  return out;
}

std::uint64_t PackedSeq::get(std::size_t i) const {
  if (i < 1 || i > r_) throw IndexError("field index " + std::to_string(i) + " out of range");
  const Layout& l = layout(f_);
  std::size_t j = i - 1;
  return (words_[j / l.s] >> ((j % l.s) * l.field)) & ((std::uint64_t(1) << f_) - 1);
}

void PackedSeq::set(std::size_t i, std::uint64_t v) {
  if (i < 1 || i > r_) throw IndexError("field index " + std::to_string(i) + " out of range");
  if (v >> f_) throw WidthError("value " + std::to_string(v) + " does not fit in " + std::to_string(f_) + " bits");
  const Layout& l = layout(f_);
  std::size_t j = i - 1;
  unsigned sh = static_cast<unsigned>((j % l.s) * l.field);
  std::uint64_t& w = words_[j / l.s];
  w = (w & ~(((std::uint64_t(1) << f_) - 1) << sh)) | (v << sh);
}

std::vector<std::uint64_t> PackedSeq::to_vector() const {
  std::vector<std::uint64_t> out(r_);
  const Layout& l = layout(f_);
  std::uint64_t m = (std::uint64_t(1) << f_) - 1;
  for (std::size_t j = 0; j < r_; ++j) out[j] = (words_[j / l.s] >> ((j % l.s) * l.field)) & m;
  return out;
}

u128 PackedSeq::load_block(std::size_t first, unsigned count) const {
  const Layout& l = layout(f_);
  if (first + count > r_) throw IndexError("block exceeds sequence");
  u128 out = 0;
  unsigned pos = 0;
  std::size_t w = first / l.s;
  unsigned off = static_cast<unsigned>(first % l.s);
  while (count > 0) {
    unsigned take = std::min(count, l.s - off);
    std::uint64_t bits = words_[w] >> (off * l.field);
    if (take * l.field < 64) bits &= (std::uint64_t(1) << (take * l.field)) - 1;
    out |= shl(u128(bits), pos);
    pos += take * l.field;
    count -= take;
    ++w;
    off = 0;
  }
  return out;
}

void PackedSeq::store_block(std::size_t first, unsigned count, u128 bits) {
  const Layout& l = layout(f_);
  if (first + count > r_) throw IndexError("block exceeds sequence");
  std::size_t w = first / l.s;
  unsigned off = static_cast<unsigned>(first % l.s);
  while (count > 0) {
    unsigned take = std::min(count, l.s - off);
    unsigned span = take * l.field;
    std::uint64_t m = span >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << span) - 1;
    std::uint64_t chunk = static_cast<std::uint64_t>(bits) & m & l.entry;
    unsigned sh = off * l.field;
    words_[w] = (words_[w] & ~(m << sh)) | (chunk << sh);
    bits = shr(bits, span);
    count -= take;
    ++w;
    off = 0;
  }
}

bool TestMask::test(std::size_t i) const {
  if (i < 1 || i > r_) throw IndexError("field index out of range");
  const Layout& l = layout(f_);
  std::size_t j = i - 1;
  return (words_[j / l.s] >> ((j % l.s) * l.field + f_)) & 1;
}

std::size_t TestMask::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

TestMask TestMask::operator&(const TestMask& o) const {
  std::vector<std::uint64_t> w(words_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = words_[i] & o.words_[i];
  word_op_count += w.size();
  return {f_, r_, std::move(w)};
}

TestMask TestMask::operator|(const TestMask& o) const {
  std::vector<std::uint64_t> w(words_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = words_[i] | o.words_[i];
  word_op_count += w.size();
  return {f_, r_, std::move(w)};
}

TestMask TestMask::operator~() const {
  const Layout& l = layout(f_);
  std::vector<std::uint64_t> w(words_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = ~words_[i] & l.test & used_fields(l, r_, i);
  word_op_count += 2 * w.size();
  return {f_, r_, std::move(w)};
}

PackedSeq ew_add(const PackedSeq& x, const PackedSeq& y) {
  check_same_shape(x, y);
  const Layout& l = layout(x.width());
  PackedSeq out(x.width(), x.size());
  auto& o = out.mutable_words();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (x.words()[i] + y.words()[i]) & l.entry;
  word_op_count += 2 * o.size();
  return out;
}

PackedSeq ew_sub(const PackedSeq& x, const PackedSeq& y) {
  check_same_shape(x, y);
  const Layout& l = layout(x.width());
  PackedSeq out(x.width(), x.size());
  auto& o = out.mutable_words();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = ((x.words()[i] | l.test) - y.words()[i]) & l.entry;
  word_op_count += 3 * o.size();
  return out;
}

PackedSeq ew_or(const PackedSeq& x, const PackedSeq& y) {
  check_same_shape(x, y);
  PackedSeq out(x.width(), x.size());
  auto& o = out.mutable_words();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x.words()[i] | y.words()[i];
  word_op_count += o.size();
  return out;
}

PackedSeq broadcast(unsigned f, std::size_t r, std::uint64_t v) {
  const Layout& l = layout(f);
  if (v >> f) throw WidthError("broadcast value does not fit the field width");
  PackedSeq out(f, r);
  auto& o = out.mutable_words();
  std::uint64_t word = v * l.low;
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = word & used_fields(l, r, i);
  word_op_count += 1 + o.size();
  return out;
}

PackedSeq iota(unsigned f, std::size_t r) {
  if (r >> f) throw WidthError("iota length does not fit the field width");
  PackedSeq out(f, r);
  for (std::size_t i = 1; i <= r; ++i) out.set(i, i);
  return out;
}

TestMask compare(const PackedSeq& x, const PackedSeq& y, Cmp op) {
  check_same_shape(x, y);
  const Layout& l = layout(x.width());
  std::vector<std::uint64_t> w(x.word_count());
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::uint64_t a = x.words()[i], b = y.words()[i];
    std::uint64_t ge = ((a | l.test) - b) & l.test;
    std::uint64_t le = ((b | l.test) - a) & l.test;
    std::uint64_t t = 0;
    switch (op) {
      case Cmp::ge: t = ge; break;
      case Cmp::le: t = le; break;
      case Cmp::eq: t = ge & le; break;
      case Cmp::ne: t = ~(ge & le) & l.test; break;
      case Cmp::gt: t = ~le & l.test; break;
      case Cmp::lt: t = ~ge & l.test; break;
    }
    w[i] = t & used_fields(l, x.size(), i);
    word_op_count += 7;
  }
  return {x.width(), x.size(), std::move(w)};
}

PackedSeq extract(const PackedSeq& x, const TestMask& t) {
  if (x.width() != t.width() || x.size() != t.size()) throw ShapeError("mask does not match sequence");
  const unsigned f = x.width();
  PackedSeq out(f, x.size());
  auto& o = out.mutable_words();
  for (std::size_t i = 0; i < o.size(); ++i) {
    std::uint64_t tw = t.words()[i];
    o[i] = x.words()[i] & (tw - (tw >> f));
  }
  word_op_count += 3 * o.size();
  return out;
}

PackedSeq ew_max(const PackedSeq& x, const PackedSeq& y) {
  TestMask t = compare(x, y, Cmp::ge);
  return ew_or(extract(x, t), extract(y, ~t));
}

PackedSeq ew_min(const PackedSeq& x, const PackedSeq& y) {
  TestMask t = compare(x, y, Cmp::le);
  return ew_or(extract(x, t), extract(y, ~t));
}

unsigned rank_word(const PackedSeq& x, std::uint64_t z) {
  const Layout& l = layout(x.width());
  if (x.word_count() > 1) throw ShapeError("rank_word needs a one-word sequence");
  if (x.size() == 0) return 0;
  if ((std::uint64_t(1) << x.width()) <= l.s) throw WidthError("rank_word needs f >= ceil(log2(s+1))");
  if (z >> x.width()) throw WidthError("rank key does not fit the field width");
  std::uint64_t used = used_fields(l, x.size(), 0);
  std::uint64_t zb = (z * l.low) & used;
  std::uint64_t c = ((zb | l.test) - x.words()[0]) & l.test & used;
  std::uint64_t sums = (c >> x.width()) * l.low;
  word_op_count += 8;
  unsigned top = static_cast<unsigned>(x.size() - 1) * l.field;
  return static_cast<unsigned>((sums >> top) & ((std::uint64_t(1) << l.field) - 1));
}

PackedSeq shift_fields(const PackedSeq& x, int offset, std::uint64_t fill) {
  if (offset < -1 || offset > 1) throw ParamError("shift_fields offset must be -1, 0 or +1");
  const unsigned f = x.width();
  if (fill >> f) throw WidthError("fill value does not fit the field width");
  const Layout& l = layout(f);
  PackedSeq out(f, x.size());
  if (x.size() == 0) return out;
  auto& o = out.mutable_words();
  const auto& in = x.words();
  const std::size_t nw = in.size();
  const unsigned top = (l.s - 1) * l.field;
  const std::uint64_t field_mask = (std::uint64_t(1) << l.field) - 1;
  if (offset == 0) {
    o = in;
    return out;
  }
  if (offset == 1) {
    for (std::size_t i = 0; i < nw; ++i) {
      std::uint64_t carry = i == 0 ? fill : (in[i - 1] >> top) & field_mask;
      std::uint64_t w = in[i] << l.field;
      if (l.field * l.s < 64) w &= (std::uint64_t(1) << (l.field * l.s)) - 1;
      o[i] = (w | carry) & used_fields(l, x.size(), i);
    }
  } else {
    for (std::size_t i = 0; i < nw; ++i) {
      std::uint64_t next = i + 1 < nw ? in[i + 1] & field_mask : 0;
      o[i] = (in[i] >> l.field) | (next << top);
    }
    // field r takes the fill value
    std::size_t j = x.size() - 1;
    std::uint64_t& w = o[j / l.s];
    unsigned sh = static_cast<unsigned>((j % l.s) * l.field);
    w = (w & ~(field_mask << sh)) | (fill << sh);
  }
  word_op_count += 5 * nw;
  return out;
}

}  // namespace kdiff
