#pragma once

#include <cstddef>
#include <vector>

namespace kdiff {

// Rooted ordered tree; node 0 may be any node, `root` names the root.
struct Tree {
  std::vector<int> parent;  // -1 for the root
  std::vector<std::vector<int>> children;
  int root = 0;

  std::size_t size() const { return parent.size(); }
  static Tree from_parents(std::vector<int> parent);
};

// Nearest common ancestors by Euler tour and a sparse-table range-min.
class NcaOracle {
 public:
  explicit NcaOracle(const Tree& t);
  int nca(int a, int b) const;
  int depth(int v) const { return depth_[v]; }

 private:
  std::vector<int> euler_;
  std::vector<int> first_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> table_;
};

// Uniformly random tree by random parent attachment on a shuffled order.
template <class Rng>
Tree random_tree(std::size_t t, Rng& rng) {
  std::vector<int> parent(t, -1);
  for (std::size_t v = 1; v < t; ++v) {
    // mix shallow and deep shapes: attach near the end with some probability
    std::size_t lo = (rng() % 4 == 0) ? (v > 4 ? v - 4 : 0) : 0;
    parent[v] = static_cast<int>(lo + rng() % (v - lo));
  }
  return Tree::from_parents(std::move(parent));
}

}  // namespace kdiff
