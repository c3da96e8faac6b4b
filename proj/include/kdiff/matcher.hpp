#pragma once

// Approximate matching with at most k differences: end positions in Q of substrings
// within edit distance k of P, with the smallest such distance.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kdiff/instrset.hpp"
#include "kdiff/packed_functions.hpp"
#include "kdiff/packed_seq.hpp"
#include "kdiff/tabulated.hpp"

namespace kdiff {

enum class Backend { sellers, lv, packed_wordpar, packed_tab };

const char* backend_name(Backend b);
// accepts "sellers", "lv", "packed-wordpar", "packed-tab"; throws ParamError otherwise
Backend parse_backend(std::string_view s);

struct Match {
  std::size_t end = 0;  // 1-based position in Q
  unsigned errors = 0;
  friend bool operator==(const Match&, const Match&) = default;
};
using MatchReport = std::vector<Match>;

// Frontier of one error level; field i (1-based) holds L_{d,e} + 1 for d = i - (k+2).
struct DiagonalFrontier {
  int e = -1;
  std::vector<std::uint64_t> biased;
  friend bool operator==(const DiagonalFrontier&, const DiagonalFrontier&) = default;
};
using FrontierTrace = std::vector<DiagonalFrontier>;

// Sellers dynamic program, O(nm) time. Requires 0 <= k < m <= n.
MatchReport sellers_search(std::string_view p, std::string_view q, unsigned k);

// Classic diagonal recursion over one chunk, lcp by suffix tree and NCA oracle.
// Requires k < m; ends are positions in qhat. Frontiers for e = -1..k go to trace.
MatchReport lv_search_chunk(std::string_view p, std::string_view qhat, unsigned k, FrontierTrace* trace = nullptr);

// Preprocessed chunk for the packed algorithm.
struct PackedChunk {
  std::size_t m = 0, n_hat = 0;
  unsigned k = 0;
  GenSuffixTree tree;
  NcaLabeling labeling;
  PackedFnSet fns;
  LncaTable lnca;  // P-leaf x Qhat-leaf pairs; built only for the tabulated backend
};

struct PackedOptions {
  const InstructionBackend* backend = nullptr;  // wordpar when null
  std::shared_ptr<const TableSet> tables;       // use the tabulated backend when set
  bool validate = false;
  unsigned pos_width = 0;    // 0: smallest feasible
  unsigned label_width = 0;  // minimum label width
};

PackedChunk prepare_chunk(std::string_view p, std::string_view qhat, unsigned k, const PackedOptions& opt = {});

// One frontier transition L_{e-1} -> L_e in four packed steps.
namespace lv_steps {
// biased Z = min(m, max(L_d + 1, L_{d-1}, L_{d+1} + 1)) + 1
PackedSeq max_positions(const PackedFnSet& fns, const PackedSeq& l);
// suffix indices into P and Qhat, clamped to the empty suffixes m+1 and n_hat+1
std::pair<PackedSeq, PackedSeq> translate(const PackedFnSet& fns, const PackedSeq& z);
PackedSeq lcp(const PackedFnSet& fns, const PackedSeq& zp, const PackedSeq& zq, const InstructionBackend& be,
              bool validate = false);
PackedSeq update(const PackedSeq& z, const PackedSeq& lcp);
// zero the diagonals below the active band and write its two boundary diagonals
void fill_boundary(const PackedFnSet& fns, PackedSeq& l, int e);
}  // namespace lv_steps

struct PackedStats {
  std::uint64_t word_ops = 0;
  std::vector<std::uint64_t> level_ops;  // word ops of each transition e = 0..k
  std::uint64_t table_hits = 0, table_fallbacks = 0;
};

MatchReport packed_lv_chunk(std::string_view p, std::string_view qhat, unsigned k, const PackedOptions& opt = {},
                            FrontierTrace* trace = nullptr, PackedStats* stats = nullptr);
MatchReport packed_lv_chunk(const PackedChunk& chunk, const InstructionBackend& be, bool validate = false,
                            FrontierTrace* trace = nullptr, PackedStats* stats = nullptr);

// Chunks of Q with their ownership windows of global end positions (lo, hi].
struct ChunkPlan {
  std::size_t start = 0, length = 0;
  std::size_t own_lo = 0, own_hi = 0;
};
std::vector<ChunkPlan> plan_chunks(std::size_t m, std::size_t n, unsigned k);

struct SearchParams {
  Backend backend = Backend::packed_wordpar;
  unsigned k = 0;
  unsigned tab_bits = 12;
  unsigned threads = 1;
  bool validate = false;
  std::uint64_t table_budget = default_table_budget;
  std::string table_cache;
};

struct SearchStats {
  std::size_t chunks = 0;
  std::uint64_t word_ops = 0;
  std::uint64_t table_hits = 0, table_fallbacks = 0;
  unsigned pos_width = 0;
};

// Requires 0 <= k < m <= n.
MatchReport chunked_search(std::string_view p, std::string_view q, const SearchParams& params,
                           SearchStats* stats = nullptr);

}  // namespace kdiff
