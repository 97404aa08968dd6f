#pragma once

#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace ripple {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

// Lower Cholesky factor of a symmetric matrix, possibly of A + jitter * I.
struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0;
  double log_det = 0.0;  // log det(lower * lower^T)

  Eigen::Index dim() const { return lower.rows(); }

  // Solves lower * y = b.
  Vector whiten(const Vector& b) const;
};

// Cholesky with the jitter ladder: on failure, retries with eps * I where
// eps = 1e-8 * trace(A) / dim (1e-8 when the trace vanishes), doubling eps up
// to 8 times. Throws DegenerateCovariance naming `what` if all attempts fail.
// A 0x0 input yields an empty factor.
CholeskyFactor cholesky_with_jitter(const Matrix& a, std::string_view what);

// log N(x | mean, L L^T).
double mvn_log_density(const Vector& x, const Vector& mean, const CholeskyFactor& factor);

double log_sum_exp(std::span<const double> values);

// Overflow-safe log(1 + exp(x)).
double log1p_exp(double x);

double normal_log_pdf(double x, double mean, double sd);

double normal_cdf(double x);

// Sample covariance with divisor n - 1 of the rows of `values`.
Matrix sample_covariance(const Matrix& values, const Vector& column_means);

}  // namespace ripple
