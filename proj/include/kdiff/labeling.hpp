#pragma once

// NCA labels from a heavy-path decomposition.
//
// A label is a triple of c-bit sublabels, left aligned (string position 1 is bit c-1):
//   p: concatenated parts h_0 l_1 h_1 ... l_j h_j, each part "0" code "1"
//   b: a 1 at the first position of every part and at |p|+1
//   l: a 1 at the first position of every light part
// Heavy codes along a path are ordered by depth; light codes of siblings are
// prefix-free. p alone identifies the node.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "kdiff/tree.hpp"

namespace kdiff {

struct Label {
  std::uint64_t p = 0, b = 0, l = 0;
  friend bool operator==(const Label&, const Label&) = default;
};

class NcaLabeling {
 public:
  // c is padded up to min_width when given; throws WidthError if c > 63
  static NcaLabeling build(const Tree& t, unsigned min_width = 0);

  unsigned width() const { return c_; }
  std::size_t size() const { return labels_.size(); }
  const Label& label(int v) const { return labels_[v]; }
  // node with the given p sublabel, or -1
  int node_of(std::uint64_t p) const;
  // top label length without the trailing b marker
  unsigned max_length() const { return max_len_; }
  std::uint64_t token() const { return token_; }

 private:
  unsigned c_ = 0;
  unsigned max_len_ = 0;
  std::uint64_t token_ = 0;
  std::vector<Label> labels_;
  std::unordered_map<std::uint64_t, int> by_p_;
};

// Label of nca(v, w) computed from label(v) and label(w) alone, by direct scanning of
// the sublabel bits. Throws ParamError in validation mode if a label is not from `lab`.
Label lnca_scalar(const NcaLabeling& lab, const Label& x, const Label& y, bool validate = false);

}  // namespace kdiff
