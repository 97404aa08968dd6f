#pragma once

#include <cstdint>

#include "ripple/models/model.hpp"

namespace ripple {

// theta ~ N(prior_mean, prior_cov);  y_i | theta ~ N(theta, noise_var I), with
// each row of `observations` one P-dimensional y_i. The posterior is Gaussian
// in closed form, which makes this the oracle model for the samplers.
class ConjugateGaussianModel final : public ModelSpec {
 public:
  ConjugateGaussianModel(Vector prior_mean, Matrix prior_cov, double noise_var, Matrix observations);

  std::string kind() const override { return "conjugate"; }
  Eigen::Index dim() const override { return prior_mean_.size(); }
  const std::vector<std::string>& param_names() const override { return names_; }
  const std::vector<Transform>& transforms() const override { return transforms_; }
  std::size_t row_count() const override { return static_cast<std::size_t>(observations_.rows()); }
  double log_likelihood(std::span<const std::size_t> rows, const Vector& theta) const override;
  double log_prior(const Vector& theta) const override;
  Vector initial_point() const override { return prior_mean_; }

  const Vector& prior_mean() const { return prior_mean_; }
  const Matrix& prior_cov() const { return prior_cov_; }
  double noise_var() const { return noise_var_; }
  const Matrix& observations() const { return observations_; }

 private:
  Vector prior_mean_;
  Matrix prior_cov_;
  CholeskyFactor prior_factor_;
  double noise_var_;
  Matrix observations_;
  std::vector<std::string> names_;
  std::vector<Transform> transforms_;
};

struct GaussianPosterior {
  Vector mean;
  Matrix cov;
};

// Exact posterior given the selected rows (the prior when rows is empty).
GaussianPosterior conjugate_posterior(const ConjugateGaussianModel& model,
                                      std::span<const std::size_t> rows);

// Same update starting from an arbitrary Gaussian rather than the prior.
GaussianPosterior conjugate_update(const GaussianPosterior& current, double noise_var,
                                   const Matrix& observations, std::span<const std::size_t> rows);

// n draws y_i ~ N(theta_true, noise_var I) with theta_true drawn from the prior.
struct ConjugateSimulation {
  Matrix observations;
  Vector true_theta;
};
ConjugateSimulation conjugate_simulate(const Vector& prior_mean, const Matrix& prior_cov,
                                       double noise_var, std::size_t n, std::uint64_t seed);

}  // namespace ripple
