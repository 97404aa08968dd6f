#include "ripple/engine/stage.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "ripple/core/error.hpp"
#include "ripple/core/parallel.hpp"
#include "ripple/smoothing/kernel.hpp"
#include "ripple/smoothing/marginal_kde.hpp"

namespace ripple {

std::string kernel_kind_name(KernelKind kind) {
  return kind == KernelKind::smoothed ? "smoothed" : "marginal_kde";
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "smoothed") return KernelKind::smoothed;
  if (name == "marginal_kde") return KernelKind::marginal_kde;
  throw std::invalid_argument("unknown kernel kind '" + name + "' (smoothed|marginal_kde)");
}

void StageConfig::validate(Eigen::Index dim) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (particles < 2) throw std::invalid_argument("stage needs M >= 2 particles");
  if (chains < 1) throw std::invalid_argument("stage needs at least one chain");
  if (static_cast<std::size_t>(particles) % chains != 0) {
    throw std::invalid_argument("M = " + std::to_string(particles) +
                                " is not divisible by the chain count " + std::to_string(chains));
  }
  if (blocks) {
    if (blocks->dim() != dim) throw std::invalid_argument("block structure dimension mismatch");
    if (kernel_kind == KernelKind::marginal_kde && !blocks->is_joint()) {
      throw std::invalid_argument("the marginal KDE kernel supports joint proposals only");
    }
    if (lambda == 1.0 && blocks->count() > 1) throw std::invalid_argument("blocking requires lambda < 1");
  }
}

namespace {

std::uint64_t hash_vector(const Vector& v) {
  std::uint64_t h = 0x84222325CBF29CE4ULL;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v(i)));
  }
  return h;
}

struct ChainOutput {
  Matrix draws;
  std::vector<std::size_t> accepted;  // per block
  std::vector<std::size_t> attempted;
  std::vector<std::uint64_t> proposal_hashes;
};

// The per-iteration accept/reject rule shared by both stage variants.
class Acceptor {
 public:
  Acceptor(const ModelSpec& model, std::span<const std::size_t> batch) : model_(model), batch_(batch) {}

  double log_likelihood(const Vector& theta) const {
    const double l = model_.log_likelihood(batch_, theta);
    return std::isfinite(l) ? l : -std::numeric_limits<double>::infinity();
  }

  // Updates (theta, ell) in place; returns whether the proposal was accepted.
  bool step(Vector& theta, double& ell, Vector proposal, RandomStream& rng) const {
    const double proposed = log_likelihood(proposal);
    if (proposed == -std::numeric_limits<double>::infinity()) return false;
    const double u = rng.uniform();
    if (u < std::exp(std::min(0.0, proposed - ell))) {
      theta = std::move(proposal);
      ell = proposed;
      return true;
    }
    return false;
  }

  double initial(const Vector& theta) const {
    const double l = model_.log_likelihood(batch_, theta);
    if (!std::isfinite(l)) throw Error("non-finite batch log-likelihood at initial chain state");
    return l;
  }

 private:
  const ModelSpec& model_;
  std::span<const std::size_t> batch_;
};

StageResult assemble(const ParticleSet& prev, const StageConfig& cfg, std::size_t batch_size,
                     std::vector<ChainOutput>& chains, std::size_t block_count, double jitter,
                     std::chrono::steady_clock::time_point start) {
  const Eigen::Index per_chain = cfg.particles / static_cast<Eigen::Index>(cfg.chains);
  Matrix values(cfg.particles, prev.dim());
  std::vector<std::size_t> accepted(block_count, 0);
  std::vector<std::size_t> attempted(block_count, 0);
  std::vector<std::uint64_t> hashes;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    values.middleRows(static_cast<Eigen::Index>(c) * per_chain, per_chain) = chains[c].draws;
    for (std::size_t b = 0; b < block_count; ++b) {
      accepted[b] += chains[c].accepted[b];
      attempted[b] += chains[c].attempted[b];
    }
    hashes.insert(hashes.end(), chains[c].proposal_hashes.begin(), chains[c].proposal_hashes.end());
  }
  StageResult out{ParticleSet(std::move(values), prev.param_names(), prev.stage() + 1), {}};
  StageStats& s = out.stats;
  s.stage = prev.stage() + 1;
  s.batch_size = batch_size;
  std::size_t total_acc = 0;
  std::size_t total_att = 0;
  for (std::size_t b = 0; b < block_count; ++b) {
    s.block_acceptance.push_back(attempted[b] ? static_cast<double>(accepted[b]) / attempted[b] : 0.0);
    total_acc += accepted[b];
    total_att += attempted[b];
  }
  s.acceptance_rate = total_att ? static_cast<double>(total_acc) / total_att : 0.0;
  s.unique_count = out.particles.unique_count();
  s.proposals = hashes.size();
  std::sort(hashes.begin(), hashes.end());
  s.unique_proposals = static_cast<std::size_t>(std::unique(hashes.begin(), hashes.end()) - hashes.begin());
  s.kernel_jitter = jitter;
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

StageResult mh_stage_joint(const ModelSpec& model, std::span<const std::size_t> batch,
                           const ParticleSet& prev, const StageConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate(prev.dim());
  if (!model.conditionally_independent()) {
    throw std::invalid_argument("stage updates require a conditionally independent model");
  }
  if (model.dim() != prev.dim()) throw std::invalid_argument("model and particle dimensions differ");

  std::variant<SmoothedKernel, MarginalKdeKernel> kernel =
      cfg.kernel_kind == KernelKind::smoothed
          ? std::variant<SmoothedKernel, MarginalKdeKernel>(build_kernel(prev, cfg.lambda))
          : std::variant<SmoothedKernel, MarginalKdeKernel>(build_marginal_kde_kernel(prev));
  double jitter = 0.0;
  if (const auto* k = std::get_if<SmoothedKernel>(&kernel); k && k->component_factor()) {
    jitter = k->component_factor()->jitter;
  }

  const Acceptor acceptor(model, batch);
  const int stage = prev.stage() + 1;
  const Eigen::Index per_chain = cfg.particles / static_cast<Eigen::Index>(cfg.chains);
  std::vector<ChainOutput> chains(cfg.chains);

  parallel_for(cfg.chains, [&](std::size_t c) {
    RandomStream rng(cfg.seed, {static_cast<std::uint64_t>(stage), c});
    ChainOutput& out = chains[c];
    out.draws.resize(per_chain, prev.dim());
    out.accepted.assign(1, 0);
    out.attempted.assign(1, 0);
    out.proposal_hashes.reserve(cfg.warmup + static_cast<std::size_t>(per_chain));

    Vector theta = prev.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(prev.size()))));
    double ell = acceptor.initial(theta);
    const std::size_t total = cfg.warmup + static_cast<std::size_t>(per_chain);
    for (std::size_t t = 0; t < total; ++t) {
      Vector proposal = std::visit(
          [&](const auto& k) {
            if constexpr (std::is_same_v<std::decay_t<decltype(k)>, SmoothedKernel>) {
              return sample_joint(k, rng);
            } else {
              return sample_marginal_kde(k, rng);
            }
          },
          kernel);
      out.proposal_hashes.push_back(hash_vector(proposal));
      ++out.attempted[0];
      if (acceptor.step(theta, ell, std::move(proposal), rng)) ++out.accepted[0];
      if (t >= cfg.warmup) out.draws.row(static_cast<Eigen::Index>(t - cfg.warmup)) = theta.transpose();
    }
  });
  return assemble(prev, cfg, batch.size(), chains, 1, jitter, start);
}

StageResult mh_stage_blocked(const ModelSpec& model, std::span<const std::size_t> batch,
                             const ParticleSet& prev, const StageConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate(prev.dim());
  if (!model.conditionally_independent()) {
    throw std::invalid_argument("stage updates require a conditionally independent model");
  }
  if (model.dim() != prev.dim()) throw std::invalid_argument("model and particle dimensions differ");
  if (cfg.kernel_kind != KernelKind::smoothed) {
    throw std::invalid_argument("blocked stages need the smoothed kernel");
  }
  const BlockStructure blocks = cfg.blocks ? *cfg.blocks : BlockStructure::joint(prev.dim());
  if (cfg.lambda == 1.0 && blocks.count() > 1) throw std::invalid_argument("blocking requires lambda < 1");

  const SmoothedKernel kernel = build_kernel(prev, cfg.lambda);
  std::vector<BlockConditional> conditionals;
  conditionals.reserve(blocks.count());
  for (const IndexSet& b : blocks.blocks()) conditionals.emplace_back(kernel, b);

  const Acceptor acceptor(model, batch);
  const int stage = prev.stage() + 1;
  const Eigen::Index per_chain = cfg.particles / static_cast<Eigen::Index>(cfg.chains);
  const std::size_t nb = blocks.count();
  std::vector<ChainOutput> chains(cfg.chains);

  parallel_for(cfg.chains, [&](std::size_t c) {
    RandomStream rng(cfg.seed, {static_cast<std::uint64_t>(stage), c});
    ChainOutput& out = chains[c];
    out.draws.resize(per_chain, prev.dim());
    out.accepted.assign(nb, 0);
    out.attempted.assign(nb, 0);
    out.proposal_hashes.reserve((cfg.warmup + static_cast<std::size_t>(per_chain)) * nb);

    Vector theta = prev.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(prev.size()))));
    double ell = acceptor.initial(theta);
    const std::size_t total = cfg.warmup + static_cast<std::size_t>(per_chain);
    for (std::size_t t = 0; t < total; ++t) {
      for (std::size_t b = 0; b < nb; ++b) {
        const BlockConditional& bc = conditionals[b];
        const Vector block_draw = sample_conditional_block(bc, gather(theta, bc.rest()), rng);
        Vector proposal = theta;
        scatter(proposal, bc.block(), block_draw);
        out.proposal_hashes.push_back(hash_vector(proposal));
        ++out.attempted[b];
        if (acceptor.step(theta, ell, std::move(proposal), rng)) ++out.accepted[b];
      }
      if (t >= cfg.warmup) out.draws.row(static_cast<Eigen::Index>(t - cfg.warmup)) = theta.transpose();
    }
  });
  return assemble(prev, cfg, batch.size(), chains, nb, kernel.component_factor() ? kernel.component_factor()->jitter : 0.0,
                  start);
}

StageResult run_stage(const ModelSpec& model, std::span<const std::size_t> batch,
                      const ParticleSet& prev, const StageConfig& cfg) {
  if (cfg.blocks && !cfg.blocks->is_joint()) return mh_stage_blocked(model, batch, prev, cfg);
  return mh_stage_joint(model, batch, prev, cfg);
}

}  // namespace ripple
