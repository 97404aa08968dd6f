#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripple/engine/partition.hpp"

namespace ripple {

// Uniformly random assignment of rows {0..n-1} to ordered batches of the given
// sizes; rows within a batch are sorted. Deterministic under seed. Throws
// std::invalid_argument when sizes do not sum to n or a size is zero.
DataPartition make_partition(std::size_t n, const std::vector<std::size_t>& sizes, std::uint64_t seed,
                             std::string design_id = "");

// J batch sizes as even as possible (the first n mod J batches get one more).
std::vector<std::size_t> equal_sizes(std::size_t n, std::size_t j);

// Parses "50,30x11" into {50, 30, ..., 30}.
std::vector<std::size_t> parse_sizes(const std::string& spec);

}  // namespace ripple
