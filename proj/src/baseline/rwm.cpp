#include "ripple/baseline/rwm.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ripple/core/error.hpp"
#include "ripple/core/parallel.hpp"
#include "ripple/core/random.hpp"
#include "ripple/diagnostics/convergence.hpp"

namespace ripple {

void RwmConfig::validate(Eigen::Index dim) const {
  if (!(warmup < iterations)) throw std::invalid_argument("rwm: warmup must be < iterations");
  if (target_accept && !(*target_accept > 0.0 && *target_accept < 1.0)) {
    throw std::invalid_argument("rwm: target_accept must lie in (0, 1)");
  }
  if (chains < 1) throw std::invalid_argument("rwm: need at least one chain");
  if (draws < 2 || static_cast<std::size_t>(draws) % chains != 0) {
    throw std::invalid_argument("rwm: draws must be >= 2 and divisible by the chain count");
  }
  if (static_cast<std::size_t>(draws) / chains > iterations - warmup) {
    throw std::invalid_argument("rwm: not enough post-warmup iterations for the requested draws");
  }
  if (adapt_window < 1) throw std::invalid_argument("rwm: adapt_window must be >= 1");
  if (!(init_scale > 0.0)) throw std::invalid_argument("rwm: init_scale must be positive");
  if (blocks && blocks->dim() != dim) throw std::invalid_argument("rwm: block dimension mismatch");
  if (initial && initial->size() != dim) throw std::invalid_argument("rwm: initial point dimension");
}

namespace {

struct BlockProposal {
  IndexSet indices;
  double target = 0.234;
  double log_scale = 0.0;
  Matrix cov;
  Matrix lower;
  std::size_t version = 0;
  std::size_t accepted = 0;
  std::size_t attempted = 0;
  std::size_t window_accepted = 0;
  std::size_t window_attempted = 0;
  double last_window_rate = 0.0;

  void refactor() {
    lower = cholesky_with_jitter(cov, "random-walk proposal covariance").lower;
    ++version;
  }
};

struct ChainResult {
  Matrix draws;
  std::vector<double> acceptance;
  std::vector<double> warmup_acceptance;
  std::vector<Matrix> proposal_covariances;
  std::size_t version_at_warmup = 0;
  std::size_t version_final = 0;
};

ChainResult run_chain(const ModelSpec& model, std::span<const std::size_t> rows, const RwmConfig& cfg,
                      const BlockStructure& blocks, std::size_t chain) {
  RandomStream rng(cfg.seed, {0xB45E, chain});
  const Eigen::Index p = model.dim();
  auto log_target = [&](const Vector& theta) {
    const double prior = model.log_prior(theta);
    if (!std::isfinite(prior)) return -std::numeric_limits<double>::infinity();
    const double lik = model.log_likelihood(rows, theta);
    return std::isfinite(lik) ? prior + lik : -std::numeric_limits<double>::infinity();
  };

  const Vector start = cfg.initial ? *cfg.initial : model.initial_point();
  Vector theta;
  double current = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 100 && !std::isfinite(current); ++attempt) {
    theta = start + cfg.init_scale * rng.standard_normal(p);
    current = log_target(theta);
  }
  if (!std::isfinite(current)) throw Error("rwm: non-finite target at initialization after 100 restarts");

  std::vector<BlockProposal> props;
  for (const IndexSet& b : blocks.blocks()) {
    BlockProposal bp;
    bp.indices = b;
    const auto d = static_cast<double>(b.size());
    bp.target = cfg.target_accept ? *cfg.target_accept : (b.size() == 1 ? 0.44 : 0.234);
    bp.log_scale = std::log(2.38 / std::sqrt(d));
    bp.cov = Matrix::Identity(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size())) *
             (cfg.init_scale * cfg.init_scale / (2.38 * 2.38 / d));
    bp.refactor();
    props.push_back(std::move(bp));
  }

  const std::size_t post = cfg.iterations - cfg.warmup;
  const std::size_t keep = static_cast<std::size_t>(cfg.draws) / cfg.chains;
  const std::size_t thin = post / keep;
  Matrix warm(static_cast<Eigen::Index>(cfg.warmup), p);
  ChainResult out;
  out.draws.resize(static_cast<Eigen::Index>(keep), p);

  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    const bool warming = t < cfg.warmup;
    if (t == cfg.warmup) {
      for (BlockProposal& bp : props) {
        bp.accepted = bp.attempted = 0;
        out.version_at_warmup += bp.version;
      }
    }
    for (BlockProposal& bp : props) {
      const auto d = static_cast<Eigen::Index>(bp.indices.size());
      const Vector step = std::exp(bp.log_scale) * (bp.lower * rng.standard_normal(d));
      Vector proposal = theta;
      for (Eigen::Index k = 0; k < d; ++k) proposal(bp.indices[static_cast<std::size_t>(k)]) += step(k);
      const double proposed = log_target(proposal);
      bool accepted = false;
      if (std::isfinite(proposed)) {
        const double u = rng.uniform();
        if (u < std::exp(std::min(0.0, proposed - current))) {
          theta = std::move(proposal);
          current = proposed;
          accepted = true;
        }
      }
      ++bp.attempted;
      bp.accepted += accepted;
      if (warming) {
        ++bp.window_attempted;
        bp.window_accepted += accepted;
        const double gain = std::pow(static_cast<double>(t + 1), -0.6);
        bp.log_scale += gain * ((accepted ? 1.0 : 0.0) - bp.target);
      }
    }
    if (warming) {
      warm.row(static_cast<Eigen::Index>(t)) = theta.transpose();
      const std::size_t done = t + 1;
      if (done % cfg.adapt_window == 0 && done >= 2 * cfg.adapt_window) {
        // Empirical covariance of the most recent half of warmup so far.
        const auto from = static_cast<Eigen::Index>(done / 2);
        const Matrix recent = warm.middleRows(from, static_cast<Eigen::Index>(done) - from);
        const Vector mean = recent.colwise().mean().transpose();
        const Matrix cov = sample_covariance(recent, mean);
        for (BlockProposal& bp : props) {
          const auto d = static_cast<Eigen::Index>(bp.indices.size());
          Matrix sub(d, d);
          for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
              sub(i, j) = cov(bp.indices[static_cast<std::size_t>(i)], bp.indices[static_cast<std::size_t>(j)]);
            }
          }
          if (sub.trace() > 0.0) {
            const bool first = bp.version == 1;
            bp.cov = sub;
            bp.refactor();
            if (first) bp.log_scale = std::log(2.38 / std::sqrt(static_cast<double>(d)));
          }
          bp.last_window_rate = bp.window_attempted
                                    ? static_cast<double>(bp.window_accepted) / bp.window_attempted
                                    : 0.0;
          bp.window_accepted = bp.window_attempted = 0;
        }
      }
    } else {
      const std::size_t k = t - cfg.warmup + 1;
      if (k % thin == 0 && k / thin <= keep) {
        out.draws.row(static_cast<Eigen::Index>(k / thin - 1)) = theta.transpose();
      }
    }
  }
  for (BlockProposal& bp : props) {
    out.acceptance.push_back(bp.attempted ? static_cast<double>(bp.accepted) / bp.attempted : 0.0);
    out.warmup_acceptance.push_back(bp.last_window_rate);
    out.proposal_covariances.push_back(std::exp(2.0 * bp.log_scale) * bp.cov);
    out.version_final += bp.version;
  }
  if (cfg.warmup == 0) out.version_at_warmup = out.version_final;
  return out;
}

}  // namespace

RwmResult adaptive_rwm(const ModelSpec& model, std::span<const std::size_t> rows, const RwmConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate(model.dim());
  const BlockStructure blocks = cfg.blocks ? *cfg.blocks : BlockStructure::joint(model.dim());

  std::vector<ChainResult> chains(cfg.chains);
  parallel_for(cfg.chains, [&](std::size_t c) { chains[c] = run_chain(model, rows, cfg, blocks, c); });

  Matrix all(cfg.draws, model.dim());
  const Eigen::Index keep = cfg.draws / static_cast<Eigen::Index>(cfg.chains);
  RwmResult result;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    all.middleRows(static_cast<Eigen::Index>(c) * keep, keep) = chains[c].draws;
    result.chain_draws.push_back(chains[c].draws);
  }
  result.particles = ParticleSet(std::move(all), model.param_names(), cfg.stage);
  if (cfg.chains >= 2 && keep >= 4) result.rhat = split_rhat_columns(result.chain_draws);
  else result.rhat = Vector::Constant(model.dim(), std::numeric_limits<double>::quiet_NaN());

  const std::size_t nb = blocks.count();
  result.acceptance.assign(nb, 0.0);
  result.warmup_acceptance.assign(nb, 0.0);
  for (const ChainResult& c : chains) {
    for (std::size_t b = 0; b < nb; ++b) {
      result.acceptance[b] += c.acceptance[b] / static_cast<double>(chains.size());
      result.warmup_acceptance[b] += c.warmup_acceptance[b] / static_cast<double>(chains.size());
    }
  }
  result.proposal_covariances = chains.front().proposal_covariances;
  result.proposal_version_at_warmup = chains.front().version_at_warmup;
  result.proposal_version_final = chains.front().version_final;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RwmResult reference_fit(const ModelSpec& model, std::span<const std::size_t> rows, const RwmConfig& cfg) {
  return adaptive_rwm(model, rows, cfg);
}

}  // namespace ripple
