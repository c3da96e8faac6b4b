#pragma once

// Multi-word algorithms over packed sequences, built from one-register instructions.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kdiff/instrset.hpp"
#include "kdiff/packed_seq.hpp"

namespace kdiff {

// Finite function with strictly increasing keys, stored as (key << vf | value)
// in a (kf+vf)-packed sequence.
class PackedFn {
 public:
  PackedFn() = default;
  PackedFn(unsigned kf, unsigned vf, std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs);

  unsigned key_width() const { return kf_; }
  unsigned value_width() const { return vf_; }
  std::size_t size() const { return pairs_.size(); }
  const PackedSeq& pairs() const { return pairs_; }
  std::uint64_t key(std::size_t i) const { return pairs_.get(i) >> vf_; }
  std::uint64_t value(std::size_t i) const { return pairs_.get(i) & ((std::uint64_t(1) << vf_) - 1); }
  bool contains(std::uint64_t key) const;

 private:
  unsigned kf_ = 0, vf_ = 0;
  PackedSeq pairs_;
};

// Three parallel c-packed sublabel sequences.
struct LabelSeq {
  PackedSeq p, b, l;
  std::size_t size() const { return p.size(); }
  unsigned width() const { return p.width(); }
  friend bool operator==(const LabelSeq&, const LabelSeq&) = default;
};

namespace packed {

// fields [first, first+count)
PackedSeq slice(const PackedSeq& x, std::size_t first, std::size_t count);

PackedSeq zip(const PackedSeq& x, const PackedSeq& y, const InstructionBackend& be = wordpar_backend());
// inverse of zip; the low part has width fy
std::pair<PackedSeq, PackedSeq> unzip(const PackedSeq& z, unsigned fy,
                                      const InstructionBackend& be = wordpar_backend());
PackedSeq merge(const PackedSeq& x, const PackedSeq& y, const InstructionBackend& be = wordpar_backend());
PackedSeq sort(const PackedSeq& x, const InstructionBackend& be = wordpar_backend());
// x sorted with every entry in dom(g)
PackedSeq map_sorted(const PackedFn& g, const PackedSeq& x, const InstructionBackend& be = wordpar_backend(),
                     bool validate = false);
PackedSeq map(const PackedFn& g, const PackedSeq& x, const InstructionBackend& be = wordpar_backend(),
              bool validate = false);
// several functions over the same domain applied to one input; shares the first sort
std::vector<PackedSeq> map_many(std::span<const PackedFn* const> gs, const PackedSeq& x,
                                const InstructionBackend& be = wordpar_backend(), bool validate = false);
LabelSeq lnca_seq(const LabelSeq& x, const LabelSeq& y, const InstructionBackend& be = wordpar_backend());

}  // namespace packed

}  // namespace kdiff
