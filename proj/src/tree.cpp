#include "kdiff/tree.hpp"

#include <bit>

#include "kdiff/error.hpp"

namespace kdiff {

Tree Tree::from_parents(std::vector<int> parent) {
  Tree t;
  t.children.assign(parent.size(), {});
  int roots = 0;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] < 0) {
      t.root = static_cast<int>(v);
      ++roots;
    } else {
      t.children[parent[v]].push_back(static_cast<int>(v));
    }
  }
  if (!parent.empty() && roots != 1) throw ParamError("tree must have exactly one root");
  t.parent = std::move(parent);
  return t;
}

NcaOracle::NcaOracle(const Tree& t) {
  const std::size_t n = t.size();
  first_.assign(n, -1);
  depth_.assign(n, 0);
  if (n == 0) return;
  // iterative Euler tour
  std::vector<std::pair<int, std::size_t>> stack{{t.root, 0}};
  euler_.push_back(t.root);
  first_[t.root] = 0;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < t.children[v].size()) {
      int c = t.children[v][next++];
      depth_[c] = depth_[v] + 1;
      first_[c] = static_cast<int>(euler_.size());
      euler_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().first);
    }
  }
  const std::size_t m = euler_.size();
  table_.push_back(euler_);
  for (std::size_t k = 1; (std::size_t(1) << k) <= m; ++k) {
    const auto& prev = table_.back();
    std::vector<int> cur(m - (std::size_t(1) << k) + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      int a = prev[i], b = prev[i + (std::size_t(1) << (k - 1))];
      cur[i] = depth_[a] <= depth_[b] ? a : b;
    }
    table_.push_back(std::move(cur));
  }
}

int NcaOracle::nca(int a, int b) const {
  int i = first_[a], j = first_[b];
  if (i > j) std::swap(i, j);
  unsigned k = static_cast<unsigned>(std::bit_width(static_cast<unsigned>(j - i + 1))) - 1;
  int x = table_[k][i], y = table_[k][j - (1 << k) + 1];
  return depth_[x] <= depth_[y] ? x : y;
}

}  // namespace kdiff
