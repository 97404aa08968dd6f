#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripple/smoothing/particle_set.hpp"

namespace ripple {

struct RefreshedSample {
  std::string label;  // "lambda=0.5", "marginal_kde", ...
  Matrix values;      // M x 2
};

struct DepletionDemo {
  ParticleSet original;  // the initial two-component draw
  ParticleSet final;     // after `rounds` resampling passes
  std::vector<std::size_t> trace;  // unique counts: initial, then after each pass
  std::vector<RefreshedSample> refreshed;
};

// Draws M points, half from N((0.25, 0), I) and half from
// N((0, 2), [[1, 0.9], [0.9, 1]]), then resamples uniformly with replacement
// `rounds` times (PP-RB refreshing with lambda = 1). The final set is then
// refreshed with the shrinkage kernel for lambda in
// {0, 0.5, 0.75, 0.9, 0.95, 0.99, 1} and with the marginal KDE.
DepletionDemo depletion_demo(Eigen::Index m, int rounds, std::uint64_t seed);

// Expected distinct values after one uniform resampling pass of M distinct
// points: M (1 - (1 - 1/M)^M).
double expected_unique_after_resample(Eigen::Index m);

}  // namespace ripple
