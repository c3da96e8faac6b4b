#pragma once

// Word-parallel instructions on one register of packed fields.
//
// Operands hold n fields contiguous from bit 0, field i (0-based) at bit i*(f+1),
// with the test bit of every field zero unless stated otherwise. Field counts are
// padded to the next power of two internally; the padded operands must fit in 128 bits.

#include <cstdint>
#include <utility>

#include "kdiff/word.hpp"

namespace kdiff {

namespace instr {

u128 reverse(u128 x, unsigned n, unsigned f);
// sorts a bitonic sequence of n (power of two) fields ascending, field 0 smallest
u128 bitonic_sort(u128 x, unsigned n, unsigned f);
// x has nx sorted fields, y has ny; result has nx+ny sorted fields
u128 merge(u128 x, unsigned nx, u128 y, unsigned ny, unsigned f);
u128 sort(u128 x, unsigned n, unsigned f);
// fields with the test bit set are vacant; the rest move to the low end in order
u128 compact(u128 x, unsigned n, unsigned f);
// field i of the result is x_i * 2^fy + y_i, width fx+fy
u128 zip(u128 x, unsigned fx, u128 y, unsigned fy, unsigned n);
std::pair<u128, u128> unzip(u128 z, unsigned fx, unsigned fy, unsigned n);
// g: u pairs (key << vf | value) of width kf+vf with increasing keys; x: n keys of
// width kf, sorted, all present in g. Result: n values of width vf.
u128 map_sorted(u128 g, unsigned u, u128 x, unsigned n, unsigned kf, unsigned vf);
u128 lsmear(u128 x, unsigned n, unsigned f);
u128 rsmear(u128 x, unsigned n, unsigned f);
u128 reverse_bits(u128 x, unsigned n, unsigned f);

// repack n fields from stride `from` to stride `to` bits (content must fit the smaller)
u128 narrow(u128 x, unsigned n, unsigned from, unsigned to);
u128 widen(u128 x, unsigned n, unsigned from, unsigned to);

// Three c-bit sublabels of n labels, one field per label.
struct Label3 {
  u128 p = 0, b = 0, l = 0;
  friend bool operator==(const Label3&, const Label3&) = default;
};
Label3 lnca(const Label3& x, const Label3& y, unsigned n, unsigned c);

}  // namespace instr

// Instruction provider for the multi-word algorithms. Block sizes are the maximum
// field counts per call the backend supports for the given widths.
class InstructionBackend {
 public:
  virtual ~InstructionBackend() = default;
  virtual const char* name() const = 0;

  virtual unsigned sort_block(unsigned f) const;
  virtual unsigned merge_block(unsigned f) const;
  virtual unsigned zip_block(unsigned fx, unsigned fy) const;
  virtual unsigned unzip_block(unsigned fx, unsigned fy) const { return zip_block(fx, fy); }
  virtual unsigned map_block(unsigned kf, unsigned vf) const;
  virtual unsigned lnca_block(unsigned c) const;

  virtual u128 sort(u128 x, unsigned n, unsigned f) const = 0;
  virtual u128 merge(u128 x, unsigned nx, u128 y, unsigned ny, unsigned f) const = 0;
  virtual u128 zip(u128 x, unsigned fx, u128 y, unsigned fy, unsigned n) const = 0;
  virtual std::pair<u128, u128> unzip(u128 z, unsigned fx, unsigned fy, unsigned n) const = 0;
  virtual u128 map_sorted(u128 g, unsigned u, u128 x, unsigned n, unsigned kf, unsigned vf) const = 0;
  virtual instr::Label3 lnca(const instr::Label3& x, const instr::Label3& y, unsigned n, unsigned c) const = 0;
};

class WordParallelBackend : public InstructionBackend {
 public:
  const char* name() const override { return "wordpar"; }
  u128 sort(u128 x, unsigned n, unsigned f) const override;
  u128 merge(u128 x, unsigned nx, u128 y, unsigned ny, unsigned f) const override;
  u128 zip(u128 x, unsigned fx, u128 y, unsigned fy, unsigned n) const override;
  std::pair<u128, u128> unzip(u128 z, unsigned fx, unsigned fy, unsigned n) const override;
  u128 map_sorted(u128 g, unsigned u, u128 x, unsigned n, unsigned kf, unsigned vf) const override;
  instr::Label3 lnca(const instr::Label3& x, const instr::Label3& y, unsigned n, unsigned c) const override;
};

const WordParallelBackend& wordpar_backend();

// record width used by map_sorted for P = padded field count
unsigned map_record_width(unsigned kf, unsigned vf, unsigned padded);

}  // namespace kdiff
