#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "kdiff/cli.hpp"

using kdiff::run_cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("search output contract") {
  Run a = cli({"search", "-p", "abc", "-k", "1", "--backend", "packed-wordpar"}, "xabcx");
  CHECK(a.code == 0);
  CHECK(a.out == "3\t1\n4\t0\n5\t1\n");
  Run b = cli({"search", "-p", "abc", "-k", "0"}, "abc");
  CHECK(b.code == 0);
  CHECK(b.out == "3\t0\n");
  Run c = cli({"search", "-p", "abc", "-k", "3"}, "abcabc");
  CHECK(c.code == 2);
  CHECK(c.out.empty());
  CHECK(c.err.find("smaller than the pattern length") != std::string::npos);
}

TEST_CASE("search outputs agree across backends and formats") {
  const std::string text = "the quick brown fox jumps over the lazy dog; the quack brawn fax";
  std::string first;
  for (const char* be : {"sellers", "lv", "packed-wordpar", "packed-tab"}) {
    Run r = cli({"search", "-p", "quick", "-k", "2", "--backend", be, "-b", "10"}, text);
    CHECK(r.code == 0);
    if (first.empty()) first = r.out;
    CHECK(r.out == first);
  }
  Run j = cli({"search", "-p", "abc", "-k", "1", "--format", "json"}, "xabcx");
  CHECK(j.out == "[{\"end\":3,\"errors\":1},{\"end\":4,\"errors\":0},{\"end\":5,\"errors\":1}]\n");
  Run t = cli({"search", "-p", "abc", "-k", "1", "--threads", "3"}, "xabcx");
  CHECK(t.out == "3\t1\n4\t0\n5\t1\n");
}

TEST_CASE("search exit statuses and input errors") {
  CHECK(cli({"search", "-p", "zzz", "-k", "0"}, "abcabc").code == 1);
  Run e = cli({"search", "-p", "zzz", "-k", "0", "--allow-empty"}, "abcabc");
  CHECK(e.code == 0);
  CHECK(e.out.empty());
  CHECK(cli({"search", "-p", "zzz", "-k", "0", "--allow-empty", "--format", "json"}, "ab").out == "[]\n");
  CHECK(cli({"search", "-p", "abc", "-k", "0", "no/such/file"}).code == 2);
  CHECK(cli({"search", "-p", "abc", "-k", "0"}, std::string("ab\xFE") + "c").code == 2);
  CHECK(cli({"search", "-p", "abc", "-k", "0", "--backend", "myers"}, "abc").code == 2);
  CHECK(cli({"search", "-p", "abc"}, "abc").code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"search", "--help"}).code == 0);
}

TEST_CASE("verify and bench") {
  Run v = cli({"verify", "--cases", "40", "--seed", "7", "-b", "10"});
  CHECK(v.code == 0);
  CHECK(v.out.find("mismatches: 0") != std::string::npos);
  Run v2 = cli({"verify", "--cases", "40", "--seed", "7", "-b", "10"});
  CHECK(v2.out == v.out);
  Run f = cli({"verify", "--cases", "5", "--inject-fault", "-b", "10"});
  CHECK(f.code != 0);
  Run b = cli({"bench", "--m", "8,16", "--k", "1,2", "--n", "2000", "-b", "10"});
  CHECK(b.code == 0);
  std::istringstream lines(b.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "backend,m,n,k,b,threads,wall_ns,word_ops,status");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    CHECK(line.substr(line.rfind(',') + 1) == "ok");
  }
  CHECK(rows == 16);
  Run s = cli({"bench", "--m", "4", "--k", "5", "--n", "100", "--backends", "lv"});
  CHECK(s.out.find("skipped") != std::string::npos);
}
