#pragma once

#include "ripple/core/linalg.hpp"

namespace ripple {

// Cubic B-splines on a clamped uniform knot vector over [lower, upper].
class BSplineBasis {
 public:
  static constexpr int kDegree = 3;

  // Needs count >= 4 and lower < upper.
  BSplineBasis(int count, double lower, double upper);

  int count() const { return count_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  const Vector& knots() const { return knots_; }

  // All `count` basis values at x; x must lie in [lower, upper].
  Vector evaluate(double x) const;

  // Greville abscissae: coefficient i reproduces f(x) = x exactly when set to
  // the i-th abscissa.
  Vector greville() const;

 private:
  int count_;
  double lower_;
  double upper_;
  Vector knots_;
};

// Tensor product g(w, d) of a wavelength basis and a day basis. Component
// l = iw * day_count + id.
class TensorBasis {
 public:
  TensorBasis(BSplineBasis wavelength, BSplineBasis day);

  int count() const { return wavelength_.count() * day_.count(); }
  const BSplineBasis& wavelength() const { return wavelength_; }
  const BSplineBasis& day() const { return day_; }

  // Evaluation on the domain rectangle; inputs outside it are clamped to the
  // boundary and a warning is logged (`clamped`, if given, reports it).
  Vector evaluate(double w, double d, bool* clamped = nullptr) const;

 private:
  BSplineBasis wavelength_;
  BSplineBasis day_;
};

Vector sdm_basis_eval(const TensorBasis& basis, double w, double d);

}  // namespace ripple
