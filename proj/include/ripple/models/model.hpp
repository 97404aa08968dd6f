#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ripple/core/linalg.hpp"

namespace ripple {

// Maps between a parameter's natural (constrained) scale and the unconstrained
// scale that smoothing and MCMC operate on.
enum class Transform { identity, log, logit };

double to_constrained(Transform t, double unconstrained);
double to_unconstrained(Transform t, double constrained);
Vector to_constrained(const Vector& theta, std::span<const Transform> transforms);
Matrix to_constrained(const Matrix& values, std::span<const Transform> transforms);
Matrix to_unconstrained(const Matrix& values, std::span<const Transform> transforms);
std::string transform_name(Transform t);

// Row indices into a model's observation table; one batch of a partition.
using RowIndices = std::vector<std::size_t>;

// The model contract consumed by the samplers. The model owns its observation
// table; a batch is a set of row indices into it. theta is always on the
// unconstrained scale.
//
// Implementations must be pure: log_likelihood(rows, theta) returns the same
// value for the same inputs, and concurrent calls are safe.
class ModelSpec {
 public:
  virtual ~ModelSpec() = default;

  virtual std::string kind() const = 0;
  virtual Eigen::Index dim() const = 0;
  virtual const std::vector<std::string>& param_names() const = 0;
  virtual const std::vector<Transform>& transforms() const = 0;

  // Number of rows (observations, or sites for the SDM) in the table.
  virtual std::size_t row_count() const = 0;

  virtual double log_likelihood(std::span<const std::size_t> rows, const Vector& theta) const = 0;

  // Log prior density of theta on the unconstrained scale (includes the log
  // Jacobian of the transforms).
  virtual double log_prior(const Vector& theta) const = 0;

  virtual bool conditionally_independent() const { return true; }

  // A point with finite log posterior, used to seed samplers.
  virtual Vector initial_point() const { return Vector::Zero(dim()); }
};

RowIndices all_rows(std::size_t n);

}  // namespace ripple
