#include "ripple/core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ripple/core/error.hpp"

namespace ripple {

Vector CholeskyFactor::whiten(const Vector& b) const {
  return lower.triangularView<Eigen::Lower>().solve(b);
}

namespace {

bool try_cholesky(const Matrix& a, CholeskyFactor& out) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return false;
  Matrix l = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double d = l(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    log_det += 2.0 * std::log(d);
  }
  out.lower = std::move(l);
  out.log_det = log_det;
  return true;
}

}  // namespace

CholeskyFactor cholesky_with_jitter(const Matrix& a, std::string_view what) {
  CholeskyFactor out;
  const Eigen::Index n = a.rows();
  if (n == 0) return out;
  if (!a.allFinite()) {
    throw DegenerateCovariance("degenerate particle covariance: non-finite entries in " +
                               std::string(what));
  }
  if (try_cholesky(a, out)) return out;

  const double trace = a.trace();
  double eps = trace > 0.0 ? 1e-8 * trace / static_cast<double>(n) : 1e-8;
  for (int attempt = 0; attempt <= 8; ++attempt, eps *= 2.0) {
    Matrix jittered = a;
    jittered.diagonal().array() += eps;
    if (try_cholesky(jittered, out)) {
      out.jitter = eps;
      return out;
    }
  }
  throw DegenerateCovariance("degenerate particle covariance: Cholesky of " + std::string(what) +
                             " failed after jitter");
}

double mvn_log_density(const Vector& x, const Vector& mean, const CholeskyFactor& factor) {
  const Vector z = factor.whiten(x - mean);
  return -0.5 * (static_cast<double>(factor.dim()) * kLogTwoPi + factor.log_det + z.squaredNorm());
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double normal_log_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * (kLogTwoPi + z * z) - std::log(sd);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Matrix sample_covariance(const Matrix& values, const Vector& column_means) {
  const Matrix centered = values.rowwise() - column_means.transpose();
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(values.rows() - 1);
  return 0.5 * (cov + cov.transpose());
}

}  // namespace ripple
