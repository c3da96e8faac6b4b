#pragma once

// Scalar reference versions of the word-parallel instructions, used as test oracles
// and as the serial baseline in benchmarks.

#include <cstdint>
#include <utility>
#include <vector>

namespace kdiff::ref {

using Values = std::vector<std::uint64_t>;

Values sorted(Values x);
Values merge(const Values& x, const Values& y);
Values reversed(Values x);

// z_i = x_i * 2^fy + y_i
Values zip(const Values& x, const Values& y, unsigned fy);
std::pair<Values, Values> unzip(const Values& z, unsigned fy);

// occupied entries (vacant[i] == false) in order
Values compact(const Values& x, const std::vector<bool>& vacant);

// g holds (key, value) pairs with strictly increasing keys; every x_i is a key
Values map_sorted(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& g, const Values& x);

std::uint64_t lsmear(std::uint64_t x, unsigned f);
std::uint64_t reverse_bits(std::uint64_t x, unsigned f);
std::uint64_t rsmear(std::uint64_t x, unsigned f);

}  // namespace kdiff::ref
