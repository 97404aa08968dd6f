#include "ripple/smoothing/marginal_kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ripple/core/log.hpp"

namespace ripple {

double quantile(Vector sample, double prob) {
  if (sample.size() == 0) throw std::invalid_argument("quantile of empty sample");
  std::sort(sample.data(), sample.data() + sample.size());
  const double h = (static_cast<double>(sample.size()) - 1.0) * prob;
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  const Eigen::Index hi = std::min<Eigen::Index>(lo + 1, sample.size() - 1);
  return sample(lo) + (h - static_cast<double>(lo)) * (sample(hi) - sample(lo));
}

double silverman_bandwidth(const Vector& sample) {
  const double n = static_cast<double>(sample.size());
  if (sample.size() < 2) throw std::invalid_argument("insufficient particles: need M >= 2");
  const double mean = sample.mean();
  const double sd = std::sqrt((sample.array() - mean).square().sum() / (n - 1.0));
  const double iqr = quantile(sample, 0.75) - quantile(sample, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

MarginalKdeKernel build_marginal_kde_kernel(const ParticleSet& particles) {
  MarginalKdeKernel k;
  k.source_ = std::make_shared<const ParticleSet>(particles);
  const Matrix& values = particles.values();
  k.bandwidths_.resize(values.cols());
  for (Eigen::Index p = 0; p < values.cols(); ++p) {
    const Vector column = values.col(p);
    double h = silverman_bandwidth(column);
    if (!(h > 0.0)) {
      h = 1e-6 * (1.0 + std::abs(column.mean()));
      ++k.fallback_count_;
      log_warning("marginal KDE: parameter '" + particles.param_names()[static_cast<std::size_t>(p)] +
                  "' is constant; using fallback bandwidth");
    }
    k.bandwidths_(p) = h;
  }
  return k;
}

Vector sample_marginal_kde(const MarginalKdeKernel& kernel, RandomStream& rng) {
  const auto row = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(kernel.source().size())));
  Vector out = kernel.source().values().row(row).transpose();
  for (Eigen::Index p = 0; p < out.size(); ++p) out(p) += kernel.bandwidths()(p) * rng.normal();
  return out;
}

}  // namespace ripple
