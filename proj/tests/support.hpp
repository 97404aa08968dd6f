#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ripple/core/linalg.hpp"
#include "ripple/core/random.hpp"
#include "ripple/smoothing/particle_set.hpp"

namespace ripple::testing {

// M draws from N(mean, cov) via an Eigen LLT, independent of the library's
// jittered factorization.
inline Matrix gaussian_draws(Eigen::Index m, const Vector& mean, const Matrix& cov, std::uint64_t seed) {
  const Matrix l = cov.llt().matrixL();
  RandomStream rng(seed);
  Matrix out(m, mean.size());
  for (Eigen::Index i = 0; i < m; ++i) out.row(i) = (mean + l * rng.standard_normal(mean.size())).transpose();
  return out;
}

inline ParticleSet gaussian_particles(Eigen::Index m, const Vector& mean, const Matrix& cov, std::uint64_t seed) {
  return ParticleSet(gaussian_draws(m, mean, cov, seed), default_param_names(mean.size()));
}

inline std::vector<double> column(const Matrix& values, Eigen::Index c) {
  std::vector<double> out(static_cast<std::size_t>(values.rows()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) out[static_cast<std::size_t>(i)] = values(i, c);
  return out;
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_pdf(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// Bivariate normal density with covariance [[a, b], [b, c]].
inline double bivariate_pdf(double x, double y, double mx, double my, double a, double b, double c) {
  const double det = a * c - b * b;
  const double dx = x - mx;
  const double dy = y - my;
  const double q = (c * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

// One-sample KS distance, written out directly as the oracle.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_01(double n) { return 1.628 / std::sqrt(n); }

}  // namespace ripple::testing
