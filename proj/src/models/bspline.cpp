#include "ripple/models/bspline.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

#include "ripple/core/log.hpp"

namespace ripple {

BSplineBasis::BSplineBasis(int count, double lower, double upper)
    : count_(count), lower_(lower), upper_(upper) {
  if (count_ < kDegree + 1) throw std::invalid_argument("B-spline basis needs at least 4 functions");
  if (!(lower_ < upper_)) throw std::invalid_argument("B-spline basis needs lower < upper");
  const int interior = count_ - kDegree - 1;
  knots_.resize(count_ + kDegree + 1);
  for (int i = 0; i <= kDegree; ++i) {
    knots_(i) = lower_;
    knots_(count_ + i) = upper_;
  }
  for (int k = 1; k <= interior; ++k) {
    knots_(kDegree + k) = lower_ + (upper_ - lower_) * k / static_cast<double>(interior + 1);
  }
}

Vector BSplineBasis::evaluate(double x) const {
  if (x < lower_ || x > upper_) throw std::invalid_argument("B-spline evaluation outside domain");
  // Knot span s with knots[s] <= x < knots[s+1]; the right end uses the last span.
  int span = count_ - 1;
  if (x < upper_) {
    const auto* first = knots_.data() + kDegree;
    const auto* last = knots_.data() + count_ + 1;
    span = static_cast<int>(std::upper_bound(first, last, x) - knots_.data()) - 1;
  }
  // Cox-de Boor triangle for the degree+1 nonzero functions on this span.
  std::array<double, kDegree + 1> n{};
  std::array<double, kDegree + 1> left{};
  std::array<double, kDegree + 1> right{};
  n[0] = 1.0;
  for (int j = 1; j <= kDegree; ++j) {
    left[j] = x - knots_(span + 1 - j);
    right[j] = knots_(span + j) - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double tmp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  Vector out = Vector::Zero(count_);
  for (int r = 0; r <= kDegree; ++r) out(span - kDegree + r) = n[r];
  return out;
}

Vector BSplineBasis::greville() const {
  Vector out(count_);
  for (int i = 0; i < count_; ++i) {
    out(i) = (knots_(i + 1) + knots_(i + 2) + knots_(i + 3)) / 3.0;
  }
  return out;
}

TensorBasis::TensorBasis(BSplineBasis wavelength, BSplineBasis day)
    : wavelength_(std::move(wavelength)), day_(std::move(day)) {}

Vector TensorBasis::evaluate(double w, double d, bool* clamped) const {
  const double wc = std::clamp(w, wavelength_.lower(), wavelength_.upper());
  const double dc = std::clamp(d, day_.lower(), day_.upper());
  const bool was_clamped = wc != w || dc != d;
  if (clamped) *clamped = was_clamped;
  if (was_clamped) {
    std::ostringstream msg;
    msg << "basis input (" << w << ", " << d << ") outside domain; clamped";
    log_warning(msg.str());
  }
  const Vector bw = wavelength_.evaluate(wc);
  const Vector bd = day_.evaluate(dc);
  Vector out(count());
  for (int i = 0; i < wavelength_.count(); ++i) {
    out.segment(i * day_.count(), day_.count()) = bw(i) * bd;
  }
  return out;
}

Vector sdm_basis_eval(const TensorBasis& basis, double w, double d) { return basis.evaluate(w, d); }

}  // namespace ripple
