#include "kdiff/matcher.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <string>

#include <omp.h>

#include "kdiff/error.hpp"

namespace kdiff {

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::sellers: return "sellers";
    case Backend::lv: return "lv";
    case Backend::packed_wordpar: return "packed-wordpar";
    case Backend::packed_tab: return "packed-tab";
  }
  return "?";
}

Backend parse_backend(std::string_view s) {
  for (Backend b : {Backend::sellers, Backend::lv, Backend::packed_wordpar, Backend::packed_tab})
    if (s == backend_name(b)) return b;
  throw ParamError("unknown backend '" + std::string(s) + "'");
}

namespace {

void check_params(std::string_view p, std::string_view q, unsigned k) {
  if (p.empty()) throw ParamError("pattern is empty");
  if (k >= p.size()) throw ParamError("k must be smaller than the pattern length");
  if (p.size() > q.size()) throw ParamError("pattern longer than the text");
}

std::size_t band(std::size_t m, std::size_t n_hat, unsigned k) { return n_hat + 2 * k + 3 - m; }

}  // namespace

MatchReport sellers_search(std::string_view p, std::string_view q, unsigned k) {
  check_params(p, q, k);
  const std::size_t m = p.size();
  std::vector<std::size_t> col(m + 1);
  for (std::size_t i = 0; i <= m; ++i) col[i] = i;
  MatchReport out;
  for (std::size_t j = 1; j <= q.size(); ++j) {
    std::size_t diag = col[0];  // C[i-1][j-1]
    col[0] = 0;
    for (std::size_t i = 1; i <= m; ++i) {
      std::size_t up = col[i];
      std::size_t best = diag + (p[i - 1] == q[j - 1] ? 0 : 1);
      best = std::min({best, col[i - 1] + 1, up + 1});
      diag = up;
      col[i] = best;
    }
    if (col[m] <= k) out.push_back({j, static_cast<unsigned>(col[m])});
  }
  return out;
}

MatchReport lv_search_chunk(std::string_view p, std::string_view qhat, unsigned k, FrontierTrace* trace) {
  const std::size_t m = p.size(), nh = qhat.size();
  if (m == 0 || k >= m) throw ParamError("lv_search_chunk needs 0 <= k < m");
  if (trace) trace->clear();
  MatchReport out;
  if (nh + k < m) return out;
  GenSuffixTree tree = GenSuffixTree::build(p, qhat);
  NcaOracle oracle(tree.tree());
  const std::size_t r = band(m, nh, k);
  // biased values; field i is index i-1
  std::vector<std::uint64_t> cur(r, 0), next(r);
  std::vector<int> first(r, -1);
  if (trace) trace->push_back({-1, cur});
  auto at = [&](std::ptrdiff_t i) -> std::int64_t {  // unbiased L at 0-based field i
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(r)) return -1;
    return static_cast<std::int64_t>(cur[i]) - 1;
  };
  for (unsigned e = 0; e <= k; ++e) {
    for (std::size_t i = 0; i < r; ++i) {
      const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(i + 1) - static_cast<std::ptrdiff_t>(k + 2);
      const std::ptrdiff_t lo = -static_cast<std::ptrdiff_t>(e) - 2;
      if (i == r - 1 || d < lo) {
        next[i] = 0;
      } else if (d == lo || d == lo + 1) {
        next[i] = e + 1;
      } else {
        std::int64_t z = std::max({at(i) + 1, at(i - 1), at(i + 1) + 1});
        z = std::min<std::int64_t>(z, static_cast<std::int64_t>(m));
        const std::int64_t jq = d + z + 1;
        std::size_t l = 0;
        if (jq >= 1 && jq <= static_cast<std::int64_t>(nh) + 1)
          l = lcp_query(tree, oracle, static_cast<std::size_t>(z + 1), static_cast<std::size_t>(jq));
        next[i] = static_cast<std::uint64_t>(z) + l + 1;
      }
      if (next[i] == m + 1 && first[i] < 0) first[i] = static_cast<int>(e);
    }
    std::swap(cur, next);
    if (trace) trace->push_back({static_cast<int>(e), cur});
  }
  for (std::size_t i = 0; i < r; ++i) {
    const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(i + 1) - static_cast<std::ptrdiff_t>(k + 2);
    if (d < -static_cast<std::ptrdiff_t>(k) || d > static_cast<std::ptrdiff_t>(nh) - static_cast<std::ptrdiff_t>(m))
      continue;
    if (first[i] >= 0) out.push_back({static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(m)),
                                      static_cast<unsigned>(first[i])});
  }
  return out;
}

PackedChunk prepare_chunk(std::string_view p, std::string_view qhat, unsigned k, const PackedOptions& opt) {
  const std::size_t m = p.size(), nh = qhat.size();
  if (m == 0 || k >= m) throw ParamError("packed_lv_chunk needs 0 <= k < m");
  if (nh + k < m) throw ParamError("chunk too short for the diagonal band");
  PackedChunk c;
  c.m = m;
  c.n_hat = nh;
  c.k = k;
  c.tree = GenSuffixTree::build(p, qhat);
  c.labeling = NcaLabeling::build(c.tree.tree(), opt.label_width);
  c.fns = build_packed_functions(c.tree, c.labeling, m, nh, k, opt.pos_width);
  if (opt.tables) {
    std::vector<int> lp, lq;
    for (std::size_t i = 1; i <= m + 1; ++i) lp.push_back(c.tree.leaf_p(i));
    for (std::size_t j = 1; j <= nh + 1; ++j) lq.push_back(c.tree.leaf_q(j));
    c.lnca = LncaTable(c.labeling, lp, lq);
  }
  return c;
}

namespace lv_steps {

PackedSeq max_positions(const PackedFnSet& fns, const PackedSeq& l) {
  PackedSeq up = ew_add(l, fns.ones);
  PackedSeq from_below = shift_fields(l, +1, 0);
  PackedSeq from_above = ew_add(shift_fields(l, -1, 0), fns.ones);
  return ew_min(fns.pattern_end, ew_max(up, ew_max(from_below, from_above)));
}

std::pair<PackedSeq, PackedSeq> translate(const PackedFnSet& fns, const PackedSeq& z) {
  const unsigned f = fns.pos_width;
  const std::size_t r = fns.r;
  PackedSeq w = ew_add(z, fns.index);  // d + z + 1 + (k + 2)
  TestMask valid = compare(w, broadcast(f, r, fns.k + 3), Cmp::ge) &
                   compare(w, broadcast(f, r, fns.n_hat + fns.k + 3), Cmp::le);
  PackedSeq zq = ew_or(extract(ew_sub(w, broadcast(f, r, fns.k + 2)), valid),
                       extract(broadcast(f, r, fns.n_hat + 1), ~valid));
  return {z, std::move(zq)};
}

PackedSeq lcp(const PackedFnSet& fns, const PackedSeq& zp, const PackedSeq& zq, const InstructionBackend& be,
              bool validate) {
  const PackedFn* np[] = {&fns.np[0], &fns.np[1], &fns.np[2]};
  const PackedFn* nq[] = {&fns.nq[0], &fns.nq[1], &fns.nq[2]};
  auto a = packed::map_many(np, zp, be, validate);
  auto b = packed::map_many(nq, zq, be, validate);
  LabelSeq x{std::move(a[0]), std::move(a[1]), std::move(a[2])};
  LabelSeq y{std::move(b[0]), std::move(b[1]), std::move(b[2])};
  LabelSeq v = packed::lnca_seq(x, y, be);
  return packed::map(fns.depth, v.p, be, validate);
}

PackedSeq update(const PackedSeq& z, const PackedSeq& lcp) { return ew_add(z, lcp); }

void fill_boundary(const PackedFnSet& fns, PackedSeq& l, int e) {
  const std::size_t r = fns.r;
  const std::ptrdiff_t lowest = static_cast<std::ptrdiff_t>(fns.k) - e;  // field of d = -(e+2)
  if (lowest > 1) {
    TestMask keep = compare(fns.index, broadcast(fns.pos_width, r, static_cast<std::uint64_t>(lowest)), Cmp::ge);
    l = extract(l, keep);
  }
  for (std::ptrdiff_t i = lowest; i <= lowest + 1; ++i)
    if (i >= 1 && i <= static_cast<std::ptrdiff_t>(r)) l.set(static_cast<std::size_t>(i), static_cast<std::uint64_t>(e) + 1);
  l.set(r, 0);
}

}  // namespace lv_steps

MatchReport packed_lv_chunk(const PackedChunk& chunk, const InstructionBackend& be, bool validate,
                            FrontierTrace* trace, PackedStats* stats) {
  const PackedFnSet& fns = chunk.fns;
  const std::size_t r = fns.r, m = chunk.m, nh = chunk.n_hat;
  const unsigned k = chunk.k, f = fns.pos_width;
  if (trace) trace->clear();
  OpScope total;
  PackedSeq l(f, r);
  PackedSeq hits(f, r);
  if (trace) trace->push_back({-1, l.to_vector()});
  for (unsigned e = 0; e <= k; ++e) {
    OpScope level;
    PackedSeq z = lv_steps::max_positions(fns, l);
    auto [zp, zq] = lv_steps::translate(fns, z);
    if (validate) {
      for (std::size_t i = 1; i <= r; ++i)
        if (zp.get(i) < 1 || zp.get(i) > m + 1 || zq.get(i) < 1 || zq.get(i) > nh + 1)
          throw DomainError("suffix index outside the domain at field " + std::to_string(i));
    }
    PackedSeq next = lv_steps::update(z, lv_steps::lcp(fns, zp, zq, be, validate));
    lv_steps::fill_boundary(fns, next, static_cast<int>(e));
    if (validate) {
      for (std::size_t i = 1; i <= r; ++i)
        if (next.get(i) > m + 1) throw DomainError("frontier entry exceeds m at field " + std::to_string(i));
    }
    l = std::move(next);
    hits = ew_add(hits, extract(fns.ones, compare(l, fns.pattern_end, Cmp::eq)));
    if (stats) stats->level_ops.push_back(level.elapsed());
    if (trace) trace->push_back({static_cast<int>(e), l.to_vector()});
  }
  MatchReport out;
  const auto cnt = hits.to_vector();
  for (std::size_t i = 1; i <= r; ++i) {
    const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(k + 2);
    if (d < -static_cast<std::ptrdiff_t>(k) || d > static_cast<std::ptrdiff_t>(nh) - static_cast<std::ptrdiff_t>(m))
      continue;
    if (cnt[i - 1] > 0)
      out.push_back({static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(m)),
                     static_cast<unsigned>(k + 1 - cnt[i - 1])});
  }
  if (stats) stats->word_ops += total.elapsed();
  return out;
}

MatchReport packed_lv_chunk(std::string_view p, std::string_view qhat, unsigned k, const PackedOptions& opt,
                            FrontierTrace* trace, PackedStats* stats) {
  const std::size_t m = p.size();
  if (m == 0 || k >= m) throw ParamError("packed_lv_chunk needs 0 <= k < m");
  if (qhat.size() + k < m) {
    if (trace) trace->clear();
    return {};
  }
  PackedChunk chunk = prepare_chunk(p, qhat, k, opt);
  if (opt.tables) {
    TabulatedBackend tab(opt.tables, &chunk.lnca);
    MatchReport rep = packed_lv_chunk(chunk, tab, opt.validate, trace, stats);
    if (stats) {
      stats->table_hits += tab.hits();
      stats->table_fallbacks += tab.fallbacks();
    }
    return rep;
  }
  const InstructionBackend& be = opt.backend ? *opt.backend : wordpar_backend();
  return packed_lv_chunk(chunk, be, opt.validate, trace, stats);
}

std::vector<ChunkPlan> plan_chunks(std::size_t m, std::size_t n, unsigned k) {
  const std::size_t len = 2 * (m + k), stride = m + k + 1;
  std::vector<ChunkPlan> out;
  if (n <= len) {
    out.push_back({0, n, 0, n});
    return out;
  }
  std::size_t start = 0;
  for (; start + len < n; start += stride) {
    std::size_t lo = out.empty() ? 0 : start + len - stride;
    out.push_back({start, len, lo, start + len});
  }
  out.push_back({n - len, len, out.back().own_hi, n});
  return out;
}

MatchReport chunked_search(std::string_view p, std::string_view q, const SearchParams& params, SearchStats* stats) {
  const unsigned k = params.k;
  check_params(p, q, k);
  if (params.backend == Backend::sellers) {
    if (stats) *stats = SearchStats{1, 0, 0, 0, 0};
    return sellers_search(p, q, k);
  }
  const std::size_t m = p.size(), n = q.size();
  const auto plan = plan_chunks(m, n, k);
  PackedOptions opt;
  opt.validate = params.validate;
  const bool packed = params.backend == Backend::packed_wordpar || params.backend == Backend::packed_tab;
  if (packed) {
    // one width for every chunk: the longest chunk binds
    std::size_t longest = 0;
    for (const auto& c : plan) longest = std::max(longest, c.length);
    opt.pos_width = required_pos_width(m, longest, k);
    if (params.backend == Backend::packed_tab)
      opt.tables = shared_tables(params.tab_bits, opt.pos_width, params.table_budget, params.table_cache);
  }
  std::vector<MatchReport> parts(plan.size());
  std::atomic<std::uint64_t> ops{0}, hits{0}, falls{0};
  const int threads = static_cast<int>(std::max(1u, params.threads));
  std::exception_ptr failure;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::ptrdiff_t ci = 0; ci < static_cast<std::ptrdiff_t>(plan.size()); ++ci) {
    const ChunkPlan& c = plan[ci];
    const std::string_view qhat = q.substr(c.start, c.length);
    try {
      MatchReport rep;
      if (params.backend == Backend::lv) {
        rep = lv_search_chunk(p, qhat, k);
      } else {
        PackedStats ps;
        rep = packed_lv_chunk(p, qhat, k, opt, nullptr, &ps);
        ops += ps.word_ops;
        hits += ps.table_hits;
        falls += ps.table_fallbacks;
      }
      for (const Match& mt : rep) {
        const std::size_t g = mt.end + c.start;
        if (g > c.own_lo && g <= c.own_hi) parts[ci].push_back({g, mt.errors});
      }
    } catch (...) {
#pragma omp critical(kdiff_chunk_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  MatchReport out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  if (stats) *stats = SearchStats{plan.size(), ops.load(), hits.load(), falls.load(), opt.pos_width};
  return out;
}

}  // namespace kdiff
