#include "ripple/engine/partition.hpp"

#include <stdexcept>

namespace ripple {

DataPartition::DataPartition(std::vector<RowIndices> batches, std::size_t n, std::string design_id,
                             std::uint64_t seed)
    : batches_(std::move(batches)), n_(n), design_id_(std::move(design_id)), seed_(seed) {
  std::vector<bool> seen(n_, false);
  std::size_t total = 0;
  for (const RowIndices& batch : batches_) {
    for (std::size_t r : batch) {
      if (r >= n_) throw std::invalid_argument("partition row " + std::to_string(r) + " out of range");
      if (seen[r]) throw std::invalid_argument("partition row " + std::to_string(r) + " in two batches");
      seen[r] = true;
      ++total;
    }
  }
  if (total != n_) {
    throw std::invalid_argument("partition covers " + std::to_string(total) + " of " +
                                std::to_string(n_) + " rows");
  }
}

std::vector<std::size_t> DataPartition::sizes() const {
  std::vector<std::size_t> out;
  for (const RowIndices& b : batches_) out.push_back(b.size());
  return out;
}

RowIndices DataPartition::rows_through(std::size_t j) const {
  RowIndices out;
  for (std::size_t b = 0; b < j && b < batches_.size(); ++b) {
    out.insert(out.end(), batches_[b].begin(), batches_[b].end());
  }
  return out;
}

}  // namespace ripple
