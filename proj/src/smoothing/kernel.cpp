#include "ripple/smoothing/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ripple {

Moments estimate_moments(const Matrix& values) {
  if (values.rows() < 2) throw std::invalid_argument("insufficient particles: need M >= 2");
  if (!values.allFinite()) throw std::invalid_argument("non-finite particle values");
  Moments out;
  out.mean = values.colwise().mean().transpose();
  out.cov = sample_covariance(values, out.mean);
  return out;
}

Moments estimate_moments(const ParticleSet& particles) {
  return estimate_moments(particles.values());
}

Matrix SmoothedKernel::effective_component_cov() const {
  Matrix out = component_cov_;
  if (factor_) out.diagonal().array() += factor_->jitter;
  return out;
}

SmoothedKernel build_kernel(const ParticleSet& particles, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  SmoothedKernel k;
  k.lambda_ = lambda;
  k.source_ = std::make_shared<const ParticleSet>(particles);
  k.moments_ = estimate_moments(particles);

  const Matrix& values = particles.values();
  if (lambda == 1.0) {
    k.component_means_ = values;
    k.component_cov_ = Matrix::Zero(values.cols(), values.cols());
    return k;
  }

  k.component_means_ = (lambda * values).rowwise() + ((1.0 - lambda) * k.moments_.mean).transpose();
  k.component_cov_ = (1.0 - lambda * lambda) * k.moments_.cov;
  k.factor_ = cholesky_with_jitter(k.component_cov_, "component covariance");

  // Whitened means let density and weight evaluations reduce to distances.
  const Matrix whitened =
      k.factor_->lower.triangularView<Eigen::Lower>().solve(k.component_means_.transpose());
  k.whitened_means_ = whitened.transpose();
  return k;
}

Vector sample_joint(const SmoothedKernel& kernel, RandomStream& rng) {
  const std::size_t i = rng.index(static_cast<std::size_t>(kernel.size()));
  const auto row = static_cast<Eigen::Index>(i);
  if (kernel.is_point_mass()) return kernel.source().values().row(row).transpose();
  const Vector z = rng.standard_normal(kernel.dim());
  return kernel.component_means().row(row).transpose() +
         kernel.component_factor()->lower.triangularView<Eigen::Lower>() * z;
}

double kernel_log_density(const SmoothedKernel& kernel, const Vector& theta) {
  if (kernel.is_point_mass()) {
    throw std::invalid_argument("density undefined for point-mass kernel (lambda = 1)");
  }
  if (theta.size() != kernel.dim()) throw std::invalid_argument("kernel_log_density: dimension mismatch");
  const CholeskyFactor& f = *kernel.component_factor();
  const Vector w = f.whiten(theta);
  const RowMatrix& means = kernel.whitened_means();
  std::vector<double> terms(static_cast<std::size_t>(kernel.size()));
  for (Eigen::Index i = 0; i < means.rows(); ++i) {
    terms[static_cast<std::size_t>(i)] = -0.5 * (means.row(i).transpose() - w).squaredNorm();
  }
  const double norm = -0.5 * (static_cast<double>(kernel.dim()) * kLogTwoPi + f.log_det);
  return norm + log_sum_exp(terms) - std::log(static_cast<double>(kernel.size()));
}

}  // namespace ripple
