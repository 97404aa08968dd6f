#pragma once

#include <memory>
#include <optional>

#include "ripple/core/linalg.hpp"
#include "ripple/core/random.hpp"
#include "ripple/smoothing/particle_set.hpp"

namespace ripple {

struct Moments {
  Vector mean;
  Matrix cov;  // divisor M - 1
};

// Column means and unbiased sample covariance. Throws std::invalid_argument
// ("insufficient particles") for fewer than two rows, or on non-finite input.
Moments estimate_moments(const Matrix& values);
Moments estimate_moments(const ParticleSet& particles);

// The shrinkage mixture built from a particle set {theta^i}:
//
//   q(theta) = (1/M) sum_i N(theta | mu^i, Sigma),
//   mu^i  = lambda * theta^i + (1 - lambda) * mean,
//   Sigma = (1 - lambda^2) * S,
//
// where mean and S are the particle mean and sample covariance. lambda = 0 is
// the single Gaussian N(mean, S); lambda = 1 is multinomial resampling of the
// particles (Sigma = 0, no factorization, no density).
//
// Instances are immutable and safe to share between threads.
class SmoothedKernel {
 public:
  double lambda() const { return lambda_; }
  const Vector& mean() const { return moments_.mean; }
  const Matrix& cov() const { return moments_.cov; }
  const Matrix& component_means() const { return component_means_; }
  // Sigma before jitter.
  const Matrix& component_cov() const { return component_cov_; }
  // Sigma + jitter * I; this is what every Gaussian operation uses.
  Matrix effective_component_cov() const;
  // Present iff lambda < 1.
  const std::optional<CholeskyFactor>& component_factor() const { return factor_; }
  bool is_point_mass() const { return !factor_.has_value(); }

  const ParticleSet& source() const { return *source_; }
  Eigen::Index size() const { return component_means_.rows(); }
  Eigen::Index dim() const { return component_means_.cols(); }

  // Rows are L^{-1} mu^i (L the component factor); empty for lambda = 1.
  const RowMatrix& whitened_means() const { return whitened_means_; }

 private:
  friend SmoothedKernel build_kernel(const ParticleSet&, double);

  double lambda_ = 0.0;
  Moments moments_;
  Matrix component_means_;
  Matrix component_cov_;
  std::optional<CholeskyFactor> factor_;
  RowMatrix whitened_means_;
  std::shared_ptr<const ParticleSet> source_;
};

// Throws std::invalid_argument for lambda outside [0, 1] and
// DegenerateCovariance if Sigma cannot be factorized after jitter.
SmoothedKernel build_kernel(const ParticleSet& particles, double lambda);

// Picks i uniformly, returns mu^i + L z. For lambda = 1 returns theta^i exactly.
Vector sample_joint(const SmoothedKernel& kernel, RandomStream& rng);

// log q(theta) via log-sum-exp over the M components. Throws for lambda = 1.
double kernel_log_density(const SmoothedKernel& kernel, const Vector& theta);

}  // namespace ripple
