#include "kdiff/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kdiff/error.hpp"
#include "kdiff/matcher.hpp"

namespace kdiff {

namespace {

constexpr int exit_ok = 0, exit_empty = 1, exit_usage = 2;

struct SearchConfig {
  std::string pattern, pattern_file, text_file = "-";
  unsigned k = 0;
  std::string backend = "packed-wordpar";
  unsigned bits = 12;
  unsigned threads = 1;
  std::string format = "tsv";
  bool validate = false, allow_empty = false;
  std::string table_cache;
};

struct VerifyConfig {
  std::size_t cases = 1000;
  std::uint64_t seed = 1;
  std::size_t max_m = 16, max_n = 300;
  unsigned bits = 12;
  unsigned threads = 1;
  bool inject_fault = false;
};

struct BenchConfig {
  std::vector<std::size_t> ms{8, 16};
  std::vector<unsigned> ks{1, 2};
  std::vector<std::size_t> ns{100000};
  std::vector<std::string> backends{"sellers", "lv", "packed-wordpar", "packed-tab"};
  unsigned bits = 12;
  unsigned threads = 1;
  unsigned sigma = 4;
  std::uint64_t seed = 1;
};

struct UsageError : Error {
  using Error::Error;
};

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_file(const std::string& path, std::istream& in) {
  if (path == "-") return read_all(in);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  return read_all(f);
}

void reject_reserved(std::string_view s, const char* what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c == 0xFE || c == 0xFF)
      throw UsageError(std::string(what) + " contains reserved byte 0x" + (c == 0xFE ? "FE" : "FF") +
                       " at offset " + std::to_string(i));
  }
}

int run_search(const SearchConfig& cfg, std::istream& in, std::ostream& out) {
  std::string pattern = cfg.pattern;
  if (!cfg.pattern_file.empty()) {
    if (!pattern.empty()) throw UsageError("give either --pattern or --pattern-file");
    pattern = read_file(cfg.pattern_file, in);
  }
  if (pattern.empty()) throw UsageError("pattern is empty");
  if (cfg.k >= pattern.size())
    throw UsageError("k = " + std::to_string(cfg.k) + " must be smaller than the pattern length " +
                     std::to_string(pattern.size()));
  if (cfg.format != "tsv" && cfg.format != "json") throw UsageError("format must be tsv or json");
  Backend backend;
  try {
    backend = parse_backend(cfg.backend);
  } catch (const ParamError& e) {
    throw UsageError(e.what());
  }
  reject_reserved(pattern, "pattern");
  const std::string text = read_file(cfg.text_file, in);
  reject_reserved(text, "text");

  MatchReport rep;
  if (text.size() >= pattern.size()) {
    SearchParams sp;
    sp.backend = backend;
    sp.k = cfg.k;
    sp.tab_bits = cfg.bits;
    sp.threads = cfg.threads;
    sp.validate = cfg.validate;
    sp.table_cache = cfg.table_cache;
    rep = chunked_search(pattern, text, sp);
  }
  if (cfg.format == "tsv") {
    for (const Match& m : rep) out << m.end << '\t' << m.errors << '\n';
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const Match& m : rep) arr.push_back({{"end", m.end}, {"errors", m.errors}});
    out << arr.dump() << '\n';
  }
  return (!rep.empty() || cfg.allow_empty) ? exit_ok : exit_empty;
}

struct Case {
  std::string p, q;
  unsigned k;
  unsigned width;
};

std::string describe(const Case& c) {
  return "m=" + std::to_string(c.p.size()) + " n=" + std::to_string(c.q.size()) + " k=" + std::to_string(c.k);
}

int run_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.max_m < 2 || cfg.max_n < cfg.max_m) throw UsageError("need 2 <= max-m <= max-n");
  std::mt19937_64 rng(cfg.seed);
  const unsigned sigmas[] = {2, 4, 26};
  std::vector<Case> cases;
  for (std::size_t i = 0; i < cfg.cases; ++i) {
    Case c;
    std::size_t m = 2 + rng() % (cfg.max_m - 1);
    std::size_t n = m + rng() % (cfg.max_n - m + 1);
    c.k = static_cast<unsigned>(rng() % m);
    unsigned sigma = sigmas[rng() % 3];
    c.p.resize(m);
    c.q.resize(n);
    for (auto& ch : c.p) ch = static_cast<char>('a' + rng() % sigma);
    for (auto& ch : c.q) ch = static_cast<char>('a' + rng() % sigma);
    std::size_t longest = 0;
    for (const auto& pl : plan_chunks(m, n, c.k)) longest = std::max(longest, pl.length);
    c.width = required_pos_width(m, longest, c.k);
    cases.push_back(std::move(c));
  }
  // cases sharing a position width share one table set
  std::stable_sort(cases.begin(), cases.end(), [](const Case& a, const Case& b) { return a.width < b.width; });
  std::size_t mismatches = 0;
  const Backend others[] = {Backend::lv, Backend::packed_wordpar, Backend::packed_tab};
  for (const Case& c : cases) {
    SearchParams sp;
    sp.k = c.k;
    sp.tab_bits = cfg.bits;
    sp.threads = cfg.threads;
    const MatchReport want = sellers_search(c.p, c.q, c.k);
    for (Backend b : others) {
      sp.backend = b;
      try {
        MatchReport got = chunked_search(c.p, c.q, sp);
        if (cfg.inject_fault && b == Backend::packed_wordpar) {
          if (got.empty()) got.push_back({1, 0});
          else ++got.back().errors;
        }
        if (got != want) {
          ++mismatches;
          err << "mismatch: backend=" << backend_name(b) << ' ' << describe(c) << '\n';
        }
      } catch (const std::exception& e) {
        ++mismatches;
        err << "error: backend=" << backend_name(b) << " b=" << cfg.bits << ' ' << describe(c) << ": " << e.what()
            << '\n';
      }
    }
  }
  out << "cases: " << cases.size() << '\n' << "mismatches: " << mismatches << '\n';
  return mismatches == 0 ? exit_ok : exit_empty;
}

int run_bench(const BenchConfig& cfg, std::ostream& out) {
  out << "backend,m,n,k,b,threads,wall_ns,word_ops,status\n";
  std::vector<Backend> backends;
  for (const auto& s : cfg.backends) {
    try {
      backends.push_back(parse_backend(s));
    } catch (const ParamError& e) {
      throw UsageError(e.what());
    }
  }
  if (cfg.sigma < 1 || cfg.sigma > 128) throw UsageError("sigma must be in 1..128");
  for (std::size_t m : cfg.ms)
    for (unsigned k : cfg.ks)
      for (std::size_t n : cfg.ns) {
        std::mt19937_64 rng(cfg.seed ^ (m * 1000003u) ^ (std::uint64_t(k) << 32) ^ (n << 8));
        std::string p(m, 'a'), q(n, 'a');
        for (auto& c : p) c = static_cast<char>('a' + rng() % cfg.sigma);
        for (auto& c : q) c = static_cast<char>('a' + rng() % cfg.sigma);
        for (Backend b : backends) {
          const bool packed = b == Backend::packed_wordpar || b == Backend::packed_tab;
          out << backend_name(b) << ',' << m << ',' << n << ',' << k << ',' << cfg.bits << ',' << cfg.threads << ',';
          if (m == 0 || k >= m || m > n) {
            out << ",,skipped\n";
            continue;
          }
          SearchParams sp;
          sp.backend = b;
          sp.k = k;
          sp.tab_bits = cfg.bits;
          sp.threads = cfg.threads;
          SearchStats st;
          try {
            if (b == Backend::packed_tab) {
              // table construction is setup, not search time
              std::size_t longest = 0;
              for (const auto& pl : plan_chunks(m, n, k)) longest = std::max(longest, pl.length);
              shared_tables(cfg.bits, required_pos_width(m, longest, k));
            }
            auto t0 = std::chrono::steady_clock::now();
            chunked_search(p, q, sp, &st);
            auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
            out << ns.count() << ',';
            if (packed) out << st.word_ops;
            out << ",ok\n";
          } catch (const Error&) {
            out << ",,skipped\n";
          }
        }
      }
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate string matching with k differences"};
  app.require_subcommand(1);
  SearchConfig sc;
  VerifyConfig vc;
  BenchConfig bc;

  CLI::App* search = app.add_subcommand("search", "Report end positions of approximate matches");
  search->add_option("-p,--pattern", sc.pattern, "Pattern bytes");
  search->add_option("--pattern-file", sc.pattern_file, "Read the pattern from a file");
  search->add_option("text", sc.text_file, "Text file, '-' or absent for standard input");
  search->add_option("-k,--errors", sc.k, "Maximum number of differences")->required();
  search->add_option("--backend", sc.backend, "sellers, lv, packed-wordpar or packed-tab")->capture_default_str();
  search->add_option("-b,--bits", sc.bits, "Table subword width for packed-tab")->capture_default_str();
  search->add_option("--threads", sc.threads, "Worker threads over chunks")->capture_default_str();
  search->add_option("--format", sc.format, "tsv or json")->capture_default_str();
  search->add_flag("--validate", sc.validate, "Check domains and frontier bounds while searching");
  search->add_flag("--allow-empty", sc.allow_empty, "Exit 0 when nothing matches");
  search->add_option("--table-cache", sc.table_cache, "Table cache file for packed-tab");

  CLI::App* verify = app.add_subcommand("verify", "Cross-check all backends on random instances");
  verify->add_option("--cases", vc.cases, "Number of instances")->capture_default_str();
  verify->add_option("--seed", vc.seed, "Random seed")->capture_default_str();
  verify->add_option("--max-m", vc.max_m, "Largest pattern length")->capture_default_str();
  verify->add_option("--max-n", vc.max_n, "Largest text length")->capture_default_str();
  verify->add_option("-b,--bits", vc.bits, "Table subword width")->capture_default_str();
  verify->add_option("--threads", vc.threads, "Worker threads over chunks")->capture_default_str();
  verify->add_flag("--inject-fault", vc.inject_fault)->group("");

  CLI::App* bench = app.add_subcommand("bench", "Time the backends over a parameter grid (CSV)");
  bench->add_option("--m", bc.ms, "Pattern lengths")->delimiter(',')->capture_default_str();
  bench->add_option("--k", bc.ks, "Error thresholds")->delimiter(',')->capture_default_str();
  bench->add_option("--n", bc.ns, "Text lengths")->delimiter(',')->capture_default_str();
  bench->add_option("--backends", bc.backends, "Backends to run")->delimiter(',');
  bench->add_option("-b,--bits", bc.bits, "Table subword width")->capture_default_str();
  bench->add_option("--threads", bc.threads, "Worker threads over chunks")->capture_default_str();
  bench->add_option("--sigma", bc.sigma, "Alphabet size of the random inputs")->capture_default_str();
  bench->add_option("--seed", bc.seed, "Random seed")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "kdiff: " << e.what() << '\n';
    return exit_usage;
  }
  try {
    if (search->parsed()) return run_search(sc, in, out);
    if (verify->parsed()) return run_verify(vc, out, err);
    return run_bench(bc, out);
  } catch (const std::exception& e) {
    err << "kdiff: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace kdiff
