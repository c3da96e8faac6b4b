#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "kdiff/tree.hpp"

namespace kdiff {

// Generalized suffix tree of P$1 and Qhat$2 with two distinct end markers.
// Leaves for suffix indices 1..m+1 of P and 1..n_hat+1 of Qhat; index m+1
// (resp. n_hat+1) is the empty suffix followed only by its end marker.
class GenSuffixTree {
 public:
  struct Edge {
    int source = 0;  // 0: P, 1: Qhat
    std::size_t start = 0, end = 0;  // 0-based half-open range in source, marker at index = length
  };

  static GenSuffixTree build(std::string_view p, std::string_view qhat);

  const Tree& tree() const { return tree_; }
  std::size_t node_count() const { return tree_.size(); }
  int leaf_p(std::size_t i) const { return leaf_p_[i - 1]; }
  int leaf_q(std::size_t j) const { return leaf_q_[j - 1]; }
  // string depth; leaves exclude their end marker
  std::size_t strdepth(int v) const { return depth_[v]; }
  const Edge& edge(int v) const { return edge_[v]; }
  std::size_t pattern_length() const { return leaf_p_.size() - 1; }
  std::size_t text_length() const { return leaf_q_.size() - 1; }

 private:
  Tree tree_;
  std::vector<int> leaf_p_, leaf_q_;
  std::vector<std::size_t> depth_;
  std::vector<Edge> edge_;
};

// length of the longest common prefix of P[i..m] and Qhat[j..n_hat]
std::size_t lcp_query(const GenSuffixTree& t, const NcaOracle& o, std::size_t i, std::size_t j);

}  // namespace kdiff
