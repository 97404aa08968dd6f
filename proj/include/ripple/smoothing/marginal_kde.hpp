#pragma once

#include <memory>

#include "ripple/core/random.hpp"
#include "ripple/smoothing/particle_set.hpp"

namespace ripple {

// Product-Gaussian KDE with a diagonal bandwidth matrix, one Silverman
// (nrd0-style) bandwidth per parameter. Used as a comparator for the
// shrinkage kernel; it ignores correlation between parameters.
class MarginalKdeKernel {
 public:
  const Vector& bandwidths() const { return bandwidths_; }
  const ParticleSet& source() const { return *source_; }
  Eigen::Index dim() const { return bandwidths_.size(); }
  // Number of columns that needed the degenerate-sample fallback.
  int fallback_count() const { return fallback_count_; }

 private:
  friend MarginalKdeKernel build_marginal_kde_kernel(const ParticleSet&);

  Vector bandwidths_;
  int fallback_count_ = 0;
  std::shared_ptr<const ParticleSet> source_;
};

// h_p = 0.9 * min(sd_p, IQR_p / 1.34) * M^{-1/5}. When IQR vanishes the sd is
// used alone (as bw.nrd0 does); a constant column falls back to
// 1e-6 * (1 + |mean_p|) and logs a warning.
MarginalKdeKernel build_marginal_kde_kernel(const ParticleSet& particles);

// Silverman bandwidth for one sample, without the fallback (may return 0).
double silverman_bandwidth(const Vector& sample);

// Type-7 (linear interpolation) quantile of an unsorted sample.
double quantile(Vector sample, double prob);

// Uniform particle pick plus independent N(0, h_p^2) perturbations.
Vector sample_marginal_kde(const MarginalKdeKernel& kernel, RandomStream& rng);

}  // namespace ripple
