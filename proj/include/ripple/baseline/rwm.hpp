#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "ripple/models/model.hpp"
#include "ripple/smoothing/block.hpp"
#include "ripple/smoothing/particle_set.hpp"

namespace ripple {

struct RwmConfig {
  std::size_t iterations = 20000;  // per chain, warmup included
  std::size_t warmup = 5000;
  std::size_t adapt_window = 200;
  // Absent: 0.44 for one-parameter blocks, 0.234 otherwise.
  std::optional<double> target_accept;
  double init_scale = 0.1;
  std::uint64_t seed = 1;
  std::optional<BlockStructure> blocks;  // absent = joint
  std::size_t chains = 4;
  Eigen::Index draws = 10000;  // M, split evenly over chains
  std::optional<Vector> initial;  // default: model.initial_point()
  int stage = 1;

  void validate(Eigen::Index dim) const;
};

struct RwmResult {
  ParticleSet particles;
  std::vector<Matrix> chain_draws;     // thinned, per chain
  Vector rhat;                         // split R-hat per parameter over chain_draws
  std::vector<double> acceptance;      // post-warmup, per block
  std::vector<double> warmup_acceptance;  // last adaptation window, per block
  std::vector<Matrix> proposal_covariances;  // per block, scale folded in (chain 0)
  // Proposal-state version counters of chain 0: adaptation must stop at warmup.
  std::size_t proposal_version_at_warmup = 0;
  std::size_t proposal_version_final = 0;
  double seconds = 0.0;

  double max_rhat() const { return rhat.maxCoeff(); }
};

// Random-walk Metropolis on the unconstrained scale targeting
// log_prior + log_likelihood(rows). During warmup the log proposal scale
// follows a Robbins-Monro recursion toward the target acceptance rate and, at
// every adaptation window, the proposal covariance is reset to the empirical
// covariance of the recent warmup draws. Everything is frozen after warmup.
// Post-warmup draws are thinned evenly to `draws` in total.
//
// Chain c uses the stream (seed, c). Initial states are jittered copies of the
// starting point; after 100 non-finite attempts an Error is thrown.
RwmResult adaptive_rwm(const ModelSpec& model, std::span<const std::size_t> rows,
                       const RwmConfig& cfg);

// All-at-once fit on the given rows (all rows for the ultimate posterior, or
// y_{1:j} for a transient reference).
RwmResult reference_fit(const ModelSpec& model, std::span<const std::size_t> rows,
                        const RwmConfig& cfg);

}  // namespace ripple
