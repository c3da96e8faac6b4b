#include "kdiff/suffix_tree.hpp"

#include <algorithm>
#include <numeric>

#include "kdiff/error.hpp"

namespace kdiff {

GenSuffixTree GenSuffixTree::build(std::string_view p, std::string_view qhat) {
  const std::size_t m = p.size(), nq = qhat.size();
  std::vector<int> s;
  s.reserve(m + nq + 2);
  for (unsigned char ch : p) s.push_back(ch);
  s.push_back(256);
  for (unsigned char ch : qhat) s.push_back(ch);
  s.push_back(257);
  const std::size_t total = s.size();

  std::vector<std::size_t> sa(total);
  std::iota(sa.begin(), sa.end(), 0);
  // each comparison stops at the first end marker, which occurs once
  std::sort(sa.begin(), sa.end(), [&](std::size_t a, std::size_t b) {
    while (s[a] == s[b]) ++a, ++b;
    return s[a] < s[b];
  });
  std::vector<std::size_t> lcp(total, 0);
  for (std::size_t k = 1; k < total; ++k) {
    std::size_t a = sa[k - 1], b = sa[k], l = 0;
    while (s[a + l] == s[b + l]) ++l;
    lcp[k] = l;
  }

  std::vector<int> parent;
  std::vector<std::size_t> depth;  // full depth, end marker included for leaves
  std::vector<std::size_t> rep;    // a suffix start below the node
  auto make = [&](std::size_t d, std::size_t r) {
    parent.push_back(-1);
    depth.push_back(d);
    rep.push_back(r);
    return static_cast<int>(parent.size() - 1);
  };
  GenSuffixTree out;
  out.leaf_p_.assign(m + 1, -1);
  out.leaf_q_.assign(nq + 1, -1);

  int root = make(0, 0);
  std::vector<int> stack{root};
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t l = lcp[k];
    int last = -1;
    while (depth[stack.back()] > l) {
      last = stack.back();
      stack.pop_back();
      if (depth[stack.back()] >= l) parent[last] = stack.back();
    }
    if (last >= 0 && depth[stack.back()] < l) {
      int w = make(l, rep[last]);
      parent[last] = w;
      stack.push_back(w);
    }
    std::size_t start = sa[k];
    int leaf = make(total - start, start);
    if (start <= m) {
      depth[leaf] = m + 1 - start;
      out.leaf_p_[start] = leaf;
    } else {
      depth[leaf] = total - start;
      out.leaf_q_[start - m - 1] = leaf;
    }
    stack.push_back(leaf);
  }
  while (stack.size() > 1) {
    int v = stack.back();
    stack.pop_back();
    parent[v] = stack.back();
  }

  const std::size_t n = parent.size();
  out.edge_.resize(n);
  out.depth_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    bool leaf = v != static_cast<std::size_t>(root) &&
                ((rep[v] <= m && out.leaf_p_[rep[v]] == static_cast<int>(v)) ||
                 (rep[v] > m && out.leaf_q_[rep[v] - m - 1] == static_cast<int>(v)));
    out.depth_[v] = leaf ? depth[v] - 1 : depth[v];
    if (parent[v] < 0) continue;
    std::size_t from = rep[v] + depth[parent[v]], to = rep[v] + depth[v];
    Edge e;
    if (rep[v] <= m) {
      e.source = 0;
      e.start = from;
      e.end = to;
    } else {
      e.source = 1;
      e.start = from - m - 1;
      e.end = to - m - 1;
    }
    out.edge_[v] = e;
  }
  out.tree_ = Tree::from_parents(parent);
  // order children by first edge character
  for (auto& ch : out.tree_.children) {
    std::sort(ch.begin(), ch.end(), [&](int a, int b) {
      std::size_t pa = rep[a] + depth[parent[a]], pb = rep[b] + depth[parent[b]];
      return s[pa] < s[pb];
    });
  }
  return out;
}

std::size_t lcp_query(const GenSuffixTree& t, const NcaOracle& o, std::size_t i, std::size_t j) {
  if (i < 1 || i > t.pattern_length() + 1 || j < 1 || j > t.text_length() + 1)
    throw IndexError("suffix index out of range");
  return t.strdepth(o.nca(t.leaf_p(i), t.leaf_q(j)));
}

}  // namespace kdiff
