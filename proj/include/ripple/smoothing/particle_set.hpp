#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ripple/core/linalg.hpp"

namespace ripple {

// M draws of a P-dimensional parameter (rows are particles), held on the
// unconstrained scale. Immutable once built; the distinct-row count is
// computed at construction.
class ParticleSet {
 public:
  ParticleSet() = default;

  // Throws std::invalid_argument unless M >= 2, P >= 1, names.size() == P and
  // every entry is finite.
  ParticleSet(Matrix values, std::vector<std::string> param_names, int stage = 1);

  const Matrix& values() const { return values_; }
  Eigen::Index size() const { return values_.rows(); }
  Eigen::Index dim() const { return values_.cols(); }
  const std::vector<std::string>& param_names() const { return param_names_; }
  int stage() const { return stage_; }
  std::size_t unique_count() const { return unique_count_; }

  Vector row(Eigen::Index i) const { return values_.row(i).transpose(); }

  ParticleSet with_stage(int stage) const;

 private:
  Matrix values_;
  std::vector<std::string> param_names_;
  int stage_ = 1;
  std::size_t unique_count_ = 0;
};

// Number of distinct rows, with equality meaning bitwise-identical doubles.
std::size_t count_unique_rows(const Matrix& values);

// Default parameter labels theta1..thetaP.
std::vector<std::string> default_param_names(Eigen::Index p);

}  // namespace ripple
