#include "ripple/models/conjugate.hpp"

#include <cmath>
#include <stdexcept>

#include "ripple/core/random.hpp"

namespace ripple {

ConjugateGaussianModel::ConjugateGaussianModel(Vector prior_mean, Matrix prior_cov, double noise_var,
                                               Matrix observations)
    : prior_mean_(std::move(prior_mean)),
      prior_cov_(std::move(prior_cov)),
      noise_var_(noise_var),
      observations_(std::move(observations)) {
  const Eigen::Index p = prior_mean_.size();
  if (p < 1) throw std::invalid_argument("conjugate model needs P >= 1");
  if (prior_cov_.rows() != p || prior_cov_.cols() != p) {
    throw std::invalid_argument("conjugate model: prior covariance has wrong shape");
  }
  if (!(noise_var_ > 0.0)) throw std::invalid_argument("conjugate model: noise variance must be > 0");
  if (observations_.rows() > 0 && observations_.cols() != p) {
    throw std::invalid_argument("conjugate model: observations must have P columns");
  }
  if (!observations_.allFinite()) throw std::invalid_argument("conjugate model: non-finite data");
  Eigen::LLT<Matrix> llt(prior_cov_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("conjugate model: prior covariance is not positive definite");
  }
  prior_factor_ = cholesky_with_jitter(prior_cov_, "conjugate prior covariance");
  for (Eigen::Index j = 0; j < p; ++j) names_.push_back("theta" + std::to_string(j + 1));
  transforms_.assign(static_cast<std::size_t>(p), Transform::identity);
}

double ConjugateGaussianModel::log_likelihood(std::span<const std::size_t> rows,
                                              const Vector& theta) const {
  if (theta.size() != dim()) throw std::invalid_argument("conjugate: theta has wrong dimension");
  const double sd = std::sqrt(noise_var_);
  double acc = 0.0;
  for (std::size_t r : rows) {
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      acc += normal_log_pdf(observations_(static_cast<Eigen::Index>(r), j), theta(j), sd);
    }
  }
  return acc;
}

double ConjugateGaussianModel::log_prior(const Vector& theta) const {
  return mvn_log_density(theta, prior_mean_, prior_factor_);
}

GaussianPosterior conjugate_update(const GaussianPosterior& current, double noise_var,
                                   const Matrix& observations, std::span<const std::size_t> rows) {
  if (rows.empty()) return current;
  const Eigen::Index p = current.mean.size();
  Vector sum = Vector::Zero(p);
  for (std::size_t r : rows) sum += observations.row(static_cast<Eigen::Index>(r)).transpose();
  const Matrix prior_precision = current.cov.inverse();
  Matrix precision = prior_precision;
  precision.diagonal().array() += static_cast<double>(rows.size()) / noise_var;
  GaussianPosterior out;
  out.cov = precision.inverse();
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  out.mean = out.cov * (prior_precision * current.mean + sum / noise_var);
  return out;
}

GaussianPosterior conjugate_posterior(const ConjugateGaussianModel& model,
                                      std::span<const std::size_t> rows) {
  return conjugate_update({model.prior_mean(), model.prior_cov()}, model.noise_var(),
                          model.observations(), rows);
}

ConjugateSimulation conjugate_simulate(const Vector& prior_mean, const Matrix& prior_cov,
                                       double noise_var, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed, {0xC0417});
  const CholeskyFactor f = cholesky_with_jitter(prior_cov, "conjugate prior covariance");
  ConjugateSimulation sim;
  const Eigen::Index p = prior_mean.size();
  sim.true_theta = prior_mean + f.lower * rng.standard_normal(p);
  sim.observations.resize(static_cast<Eigen::Index>(n), p);
  const double sd = std::sqrt(noise_var);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) sim.observations(i, j) = sim.true_theta(j) + sd * rng.normal();
  }
  return sim;
}

}  // namespace ripple
