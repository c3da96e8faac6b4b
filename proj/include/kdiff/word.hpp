#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace kdiff {

using u128 = unsigned __int128;

inline constexpr unsigned kWordBits = 64;

// Word operations executed by the instruction kernels on this thread.
inline thread_local std::uint64_t word_op_count = 0;

class OpScope {
 public:
  OpScope() : start_(word_op_count) {}
  std::uint64_t elapsed() const { return word_op_count - start_; }

 private:
  std::uint64_t start_;
};

constexpr u128 shl(u128 v, unsigned s) { return s >= 128 ? u128(0) : v << s; }
constexpr u128 shr(u128 v, unsigned s) { return s >= 128 ? u128(0) : v >> s; }
constexpr u128 ones(unsigned bits) { return bits >= 128 ? ~u128(0) : (u128(1) << bits) - 1; }

// A two-word register. Every arithmetic or logical operation counts as one word op.
class Reg {
 public:
  constexpr Reg() = default;
  constexpr Reg(u128 v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  constexpr u128 value() const { return v_; }

  friend Reg operator+(Reg a, Reg b) { ++word_op_count; return a.v_ + b.v_; }
  friend Reg operator-(Reg a, Reg b) { ++word_op_count; return a.v_ - b.v_; }
  friend Reg operator*(Reg a, Reg b) { ++word_op_count; return a.v_ * b.v_; }
  friend Reg operator&(Reg a, Reg b) { ++word_op_count; return a.v_ & b.v_; }
  friend Reg operator|(Reg a, Reg b) { ++word_op_count; return a.v_ | b.v_; }
  friend Reg operator^(Reg a, Reg b) { ++word_op_count; return a.v_ ^ b.v_; }
  friend Reg operator<<(Reg a, unsigned s) { ++word_op_count; return shl(a.v_, s); }
  friend Reg operator>>(Reg a, unsigned s) { ++word_op_count; return shr(a.v_, s); }
  Reg operator~() const { ++word_op_count; return ~v_; }
  friend bool operator==(Reg a, Reg b) { return a.v_ == b.v_; }

 private:
  u128 v_ = 0;
};

// sum_{i<count} 2^(i*stride), for stride*count up to 128 bits (higher terms drop out)
namespace detail {
struct ReplicateTable {
  // rep[stride][count], stride in [1,128], count in [0,128]
  std::array<std::array<u128, 129>, 129> rep{};
  ReplicateTable();
};
extern const ReplicateTable replicate_table;
}  // namespace detail

inline u128 replicate(unsigned stride, unsigned count) {
  if (stride == 0 || stride > 128) return count ? 1 : 0;
  return detail::replicate_table.rep[stride][count > 128 ? 128 : count];
}

// count fields of `width` ones, `stride` apart, starting at bit `offset`
inline u128 field_pattern(unsigned stride, unsigned count, unsigned width, unsigned offset = 0) {
  return replicate(stride, count) * shl(ones(width), offset);
}

constexpr unsigned bit_width_of(std::uint64_t v) { return static_cast<unsigned>(std::bit_width(v)); }

constexpr unsigned floor_pow2(unsigned v) { return v == 0 ? 0 : std::bit_floor(v); }
constexpr unsigned ceil_pow2(unsigned v) { return v <= 1 ? 1 : std::bit_ceil(v); }
constexpr unsigned log2_exact(unsigned v) { return static_cast<unsigned>(std::countr_zero(v)); }

}  // namespace kdiff
