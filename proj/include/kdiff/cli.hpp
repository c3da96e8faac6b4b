#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kdiff {

// Entry point of the kdiff command line tool; returns the process exit status.
// Subcommands: search, verify, bench.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace kdiff
