#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripple/models/model.hpp"

namespace ripple {

// An ordered partition of the rows {0, ..., n-1} into batches y_1, ..., y_J.
class DataPartition {
 public:
  DataPartition() = default;
  // Throws std::invalid_argument unless the batches are disjoint and cover
  // {0, ..., n-1}. Empty batches are allowed.
  DataPartition(std::vector<RowIndices> batches, std::size_t n, std::string design_id = "",
                std::uint64_t seed = 0);

  const std::vector<RowIndices>& batches() const { return batches_; }
  const RowIndices& batch(std::size_t j) const { return batches_.at(j); }
  std::size_t batch_count() const { return batches_.size(); }
  std::size_t row_count() const { return n_; }
  std::vector<std::size_t> sizes() const;
  const std::string& design_id() const { return design_id_; }
  std::uint64_t seed() const { return seed_; }

  // Rows of batches 0..j-1 (the first j batches), in batch order.
  RowIndices rows_through(std::size_t j) const;

 private:
  std::vector<RowIndices> batches_;
  std::size_t n_ = 0;
  std::string design_id_;
  std::uint64_t seed_ = 0;
};

}  // namespace ripple
