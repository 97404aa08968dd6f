#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ripple/models/model.hpp"
#include "ripple/smoothing/block.hpp"
#include "ripple/smoothing/particle_set.hpp"

namespace ripple {

enum class KernelKind { smoothed, marginal_kde };

std::string kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

struct StageConfig {
  double lambda = 0.0;
  Eigen::Index particles = 10000;  // M
  // Absent means joint proposals.
  std::optional<BlockStructure> blocks;
  std::size_t chains = 4;  // C; must divide M
  std::size_t warmup = 500;
  std::uint64_t seed = 1;
  KernelKind kernel_kind = KernelKind::smoothed;

  // Throws std::invalid_argument describing the first violated invariant.
  void validate(Eigen::Index dim) const;
};

struct StageStats {
  int stage = 0;
  std::size_t batch_size = 0;
  double acceptance_rate = 0.0;
  std::vector<double> block_acceptance;  // one entry per block (one for joint)
  std::size_t unique_count = 0;
  std::size_t proposals = 0;
  std::size_t unique_proposals = 0;
  double kernel_jitter = 0.0;
  double seconds = 0.0;
};

struct StageResult {
  ParticleSet particles;
  StageStats stats;
};

// One independence-MH stage with joint proposals from the kernel built on
// `prev`. Each of C chains starts at a uniformly drawn previous particle, runs
// warmup + M/C iterations and keeps the post-warmup states; a proposal is
// accepted when u < min(1, exp(l(theta*) - l(theta))) with l the batch
// log-likelihood. Chain c of stage s draws from the stream (seed, s, c).
StageResult mh_stage_joint(const ModelSpec& model, std::span<const std::size_t> batch,
                           const ParticleSet& prev, const StageConfig& cfg);

// MH-within-Gibbs variant: each iteration sweeps the blocks in order, drawing
// theta*_b from the kernel's conditional mixture given the chain's current
// theta_-b and accepting with the same likelihood ratio.
StageResult mh_stage_blocked(const ModelSpec& model, std::span<const std::size_t> batch,
                             const ParticleSet& prev, const StageConfig& cfg);

// Dispatches on cfg.blocks.
StageResult run_stage(const ModelSpec& model, std::span<const std::size_t> batch,
                      const ParticleSet& prev, const StageConfig& cfg);

}  // namespace ripple
