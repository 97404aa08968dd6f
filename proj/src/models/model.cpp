#include "ripple/models/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ripple {

double to_constrained(Transform t, double u) {
  switch (t) {
    case Transform::identity:
      return u;
    case Transform::log:
      return std::exp(u);
    case Transform::logit:
      return 1.0 / (1.0 + std::exp(-u));
  }
  return u;
}

double to_unconstrained(Transform t, double c) {
  switch (t) {
    case Transform::identity:
      return c;
    case Transform::log:
      if (!(c > 0.0)) throw std::invalid_argument("log transform needs a positive value");
      return std::log(c);
    case Transform::logit:
      if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("logit transform needs a value in (0, 1)");
      return std::log(c) - std::log1p(-c);
  }
  return c;
}

Vector to_constrained(const Vector& theta, std::span<const Transform> transforms) {
  Vector out(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    out(j) = to_constrained(transforms[static_cast<std::size_t>(j)], theta(j));
  }
  return out;
}

Matrix to_constrained(const Matrix& values, std::span<const Transform> transforms) {
  Matrix out(values.rows(), values.cols());
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    const Transform t = transforms[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < values.rows(); ++i) out(i, j) = to_constrained(t, values(i, j));
  }
  return out;
}

Matrix to_unconstrained(const Matrix& values, std::span<const Transform> transforms) {
  Matrix out(values.rows(), values.cols());
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    const Transform t = transforms[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < values.rows(); ++i) out(i, j) = to_unconstrained(t, values(i, j));
  }
  return out;
}

std::string transform_name(Transform t) {
  switch (t) {
    case Transform::identity:
      return "identity";
    case Transform::log:
      return "log";
    case Transform::logit:
      return "logit";
  }
  return "identity";
}

RowIndices all_rows(std::size_t n) {
  RowIndices rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace ripple
