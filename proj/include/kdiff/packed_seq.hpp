#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kdiff/word.hpp"

namespace kdiff {

// Geometry of an f-packed layout: f entry bits plus one test bit per field,
// s = floor(64 / (f+1)) fields per word, fields never straddle words.
struct Layout {
  unsigned f = 0;
  unsigned field = 0;  // f + 1
  unsigned s = 0;
  std::uint64_t low = 0;    // (0^f 1)^s
  std::uint64_t test = 0;   // I_{s,f}
  std::uint64_t entry = 0;  // entry bits of all s fields
};

// f in [1, 63]; throws WidthError otherwise
namespace detail {
extern const std::array<Layout, 64> layouts;
[[noreturn]] void bad_width(unsigned f);
}  // namespace detail

inline const Layout& layout(unsigned f) {
  if (f < 1 || f > 63) detail::bad_width(f);
  return detail::layouts[f];
}

enum class Cmp { eq, ne, ge, le, gt, lt };

class TestMask;

// Sequence of r unsigned f-bit integers, 1-indexed, test bits always zero.
class PackedSeq {
 public:
  PackedSeq() = default;
  PackedSeq(unsigned f, std::size_t r);

  static PackedSeq build(unsigned f, std::span<const std::uint64_t> values);
  static PackedSeq from_words(unsigned f, std::size_t r, std::vector<std::uint64_t> words);

  unsigned width() const { return f_; }
  std::size_t size() const { return r_; }
  unsigned fields_per_word() const { return layout(f_).s; }
  std::size_t word_count() const { return words_.size(); }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& mutable_words() { return words_; }

  std::uint64_t get(std::size_t i) const;
  void set(std::size_t i, std::uint64_t v);
  std::vector<std::uint64_t> to_vector() const;

  // count consecutive fields starting at 0-based index first, contiguous from bit 0
  // with stride f+1; count*(f+1) <= 128
  u128 load_block(std::size_t first, unsigned count) const;
  void store_block(std::size_t first, unsigned count, u128 bits);

  friend bool operator==(const PackedSeq&, const PackedSeq&) = default;

 private:
  unsigned f_ = 0;
  std::size_t r_ = 0;
  std::vector<std::uint64_t> words_;
};

// One test bit per field of a PackedSeq geometry.
class TestMask {
 public:
  TestMask() = default;
  TestMask(unsigned f, std::size_t r, std::vector<std::uint64_t> words)
      : f_(f), r_(r), words_(std::move(words)) {}

  unsigned width() const { return f_; }
  std::size_t size() const { return r_; }
  const std::vector<std::uint64_t>& words() const { return words_; }
  bool test(std::size_t i) const;
  std::size_t count() const;

  TestMask operator&(const TestMask& o) const;
  TestMask operator|(const TestMask& o) const;
  TestMask operator~() const;
  friend bool operator==(const TestMask&, const TestMask&) = default;

 private:
  unsigned f_ = 0;
  std::size_t r_ = 0;
  std::vector<std::uint64_t> words_;
};

PackedSeq ew_add(const PackedSeq& x, const PackedSeq& y);  // mod 2^f
PackedSeq ew_sub(const PackedSeq& x, const PackedSeq& y);  // mod 2^f
PackedSeq broadcast(unsigned f, std::size_t r, std::uint64_t v);
PackedSeq iota(unsigned f, std::size_t r);  // J_r = <1, 2, ..., r>
TestMask compare(const PackedSeq& x, const PackedSeq& y, Cmp op);
PackedSeq extract(const PackedSeq& x, const TestMask& t);
PackedSeq ew_or(const PackedSeq& x, const PackedSeq& y);
PackedSeq ew_max(const PackedSeq& x, const PackedSeq& y);
PackedSeq ew_min(const PackedSeq& x, const PackedSeq& y);

// |{ i : x_i <= z }| over a one-word sequence; needs f >= ceil(log2(s+1))
unsigned rank_word(const PackedSeq& x, std::uint64_t z);

// result_i = x_{i-offset}; vacated fields take `fill`; offset in {-1, +1} or 0
PackedSeq shift_fields(const PackedSeq& x, int offset, std::uint64_t fill);

}  // namespace kdiff
