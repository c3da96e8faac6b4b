#pragma once

#include <array>
#include <cstddef>

#include "kdiff/labeling.hpp"
#include "kdiff/packed_ops.hpp"
#include "kdiff/suffix_tree.hpp"

namespace kdiff {

// Functions over the generalized suffix tree of one chunk, in packed form.
//   np[s]: P-suffix index 1..m+1 -> sublabel s of its leaf (s = p, b, l)
//   nq[s]: Qhat-suffix index 1..n_hat+1 -> sublabel s of its leaf
//   depth: p sublabel of a node -> string depth
struct PackedFnSet {
  unsigned pos_width = 0;    // f for positions, indices and depths
  unsigned label_width = 0;  // c
  std::size_t m = 0, n_hat = 0, r = 0;
  unsigned k = 0;
  std::array<PackedFn, 3> np, nq;
  PackedFn depth;
  PackedSeq ones, pattern_end, index;  // 1_r, (m+1)_r, J_r
};

// smallest position width for the given chunk geometry
unsigned required_pos_width(std::size_t m, std::size_t n_hat, unsigned k);

// pos_width 0 picks the smallest feasible width; a smaller explicit width is an error
PackedFnSet build_packed_functions(const GenSuffixTree& tree, const NcaLabeling& lab, std::size_t m,
                                   std::size_t n_hat, unsigned k, unsigned pos_width = 0);

}  // namespace kdiff
