#include "kdiff/word.hpp"

#include <array>

namespace kdiff {

namespace detail {

ReplicateTable::ReplicateTable() {
  for (unsigned stride = 1; stride <= 128; ++stride) {
    u128 acc = 0;
    for (unsigned c = 0; c <= 128; ++c) {
      rep[stride][c] = acc;
      acc |= shl(u128(1), c * stride);
    }
  }
}

const ReplicateTable replicate_table;

}  // namespace detail


}  // namespace kdiff
