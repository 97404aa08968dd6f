#include <doctest.h>

#include "ripple/core/error.hpp"
#include "ripple/engine/partition.hpp"
#include "ripple/engine/recursive.hpp"
#include "ripple/engine/stage.hpp"
#include "ripple/models/conjugate.hpp"
#include "ripple/smoothing/kernel.hpp"
#include "support.hpp"

using namespace ripple;
using namespace ripple::testing;

namespace {

// Constant likelihood: every proposal is accepted.
class FlatModel final : public ModelSpec {
 public:
  explicit FlatModel(Eigen::Index p) : names_(default_param_names(p)), transforms_(std::size_t(p), Transform::identity) {}
  std::string kind() const override { return "flat"; }
  Eigen::Index dim() const override { return static_cast<Eigen::Index>(names_.size()); }
  const std::vector<std::string>& param_names() const override { return names_; }
  const std::vector<Transform>& transforms() const override { return transforms_; }
  std::size_t row_count() const override { return 10; }
  double log_likelihood(std::span<const std::size_t>, const Vector&) const override { return 1.5; }
  double log_prior(const Vector&) const override { return 0.0; }

 private:
  std::vector<std::string> names_;
  std::vector<Transform> transforms_;
};

// Throws once the batch contains row `bad`.
class FailingModel final : public ModelSpec {
 public:
  explicit FailingModel(std::size_t bad) : bad_(bad) {}
  std::string kind() const override { return "failing"; }
  Eigen::Index dim() const override { return 1; }
  const std::vector<std::string>& param_names() const override { return names_; }
  const std::vector<Transform>& transforms() const override { return transforms_; }
  std::size_t row_count() const override { return 4; }
  double log_likelihood(std::span<const std::size_t> rows, const Vector&) const override {
    for (auto r : rows) {
      if (r == bad_) throw Error("broken row");
    }
    return 0.0;
  }
  double log_prior(const Vector&) const override { return 0.0; }

 private:
  std::size_t bad_;
  std::vector<std::string> names_{"theta1"};
  std::vector<Transform> transforms_{Transform::identity};
};

StageConfig config(double lambda, Eigen::Index m, std::uint64_t seed = 1) {
  StageConfig c;
  c.lambda = lambda;
  c.particles = m;
  c.chains = 4;
  c.warmup = 200;
  c.seed = seed;
  return c;
}

std::vector<RowIndices> consecutive_batches(std::size_t n, std::size_t j) {
  std::vector<RowIndices> out(j);
  for (std::size_t i = 0; i < n; ++i) out[i * j / n].push_back(i);
  return out;
}

// Posterior draws for the first batch, standing in for a stage-1 sampler.
ParticleSet exact_stage1(const ConjugateGaussianModel& model, const RowIndices& rows, Eigen::Index m, std::uint64_t seed) {
  const auto post = conjugate_posterior(model, rows);
  return ParticleSet(gaussian_draws(m, post.mean, post.cov, seed), model.param_names());
}

}  // namespace

TEST_CASE("stage config validation") {
  StageConfig c = config(0.5, 10);
  c.chains = 3;
  CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
  c = config(1.5, 8);
  CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
  c = config(0.0, 8);
  c.blocks = BlockStructure({{0}, {1}}, 2);
  c.kernel_kind = KernelKind::marginal_kde;
  CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
  c.kernel_kind = KernelKind::smoothed;
  c.lambda = 1.0;
  CHECK_THROWS_WITH(c.validate(2), doctest::Contains("blocking requires lambda < 1"));
  CHECK(parse_kernel_kind("marginal_kde") == KernelKind::marginal_kde);
  CHECK_THROWS_AS(parse_kernel_kind("box"), std::invalid_argument);
}

TEST_CASE("data partition validation") {
  CHECK_NOTHROW(DataPartition({{0, 2}, {1, 3}}, 4));
  CHECK_THROWS_AS(DataPartition({{0, 2}, {2, 3}}, 4), std::invalid_argument);
  CHECK_THROWS_AS(DataPartition({{0, 2}, {3}}, 4), std::invalid_argument);
  CHECK_THROWS_AS(DataPartition({{0, 7}, {1, 2, 3}}, 4), std::invalid_argument);
  const DataPartition p({{3, 0}, {}, {1, 2}}, 4);
  CHECK(p.sizes() == std::vector<std::size_t>{2, 0, 2});
  CHECK(p.rows_through(2) == RowIndices{3, 0});
}

TEST_CASE("mh_stage_joint examples") {
  const ParticleSet prev = gaussian_particles(400, Vector::Zero(2), Matrix::Identity(2, 2), 1);
  const FlatModel flat(2);
  const RowIndices batch{0, 1, 2};

  SUBCASE("constant likelihood accepts everything") {
    const auto r = mh_stage_joint(flat, batch, prev, config(0.5, 2000));
    CHECK(r.stats.acceptance_rate == 1.0);
    CHECK(r.stats.unique_count == 2000);
    CHECK(r.particles.stage() == 2);
  }
  SUBCASE("lambda = 1 keeps a subset of the previous particles") {
    const auto sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 10, 3);
    const ConjugateGaussianModel model(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, sim.observations);
    const auto r = mh_stage_joint(model, all_rows(10), prev, config(1.0, 1000));
    for (Eigen::Index i = 0; i < r.particles.size(); ++i) {
      bool found = false;
      for (Eigen::Index j = 0; j < prev.size() && !found; ++j) found = prev.row(j) == r.particles.row(i);
      CHECK(found);
    }
    CHECK(r.stats.unique_count <= prev.unique_count());
  }
  SUBCASE("conjugate posterior after three batches") {
    const Matrix prior_cov = Matrix::Identity(1, 1);
    const auto sim = conjugate_simulate(Vector::Zero(1), prior_cov, 1.0, 60, 4);
    const ConjugateGaussianModel model(Vector::Zero(1), prior_cov, 1.0, sim.observations);
    const DataPartition partition(consecutive_batches(60, 3), 60);
    const ParticleSet stage1 = exact_stage1(model, partition.batch(0), 10000, 5);
    const auto run = run_recursive(model, partition, config(0.0, 10000), stage1);
    const auto post = conjugate_posterior(model, all_rows(60));
    const double sd = std::sqrt(post.cov(0, 0));
    const double d = ks_distance(column(run.stages.back().values(), 0),
                                 [&](double x) { return std_normal_cdf((x - post.mean(0)) / sd); });
    CHECK(d < 0.03);
  }
  SUBCASE("non-finite initial likelihood is an error") {
    class NanModel final : public ModelSpec {
     public:
      std::string kind() const override { return "nan"; }
      Eigen::Index dim() const override { return 2; }
      const std::vector<std::string>& param_names() const override { return names_; }
      const std::vector<Transform>& transforms() const override { return t_; }
      std::size_t row_count() const override { return 1; }
      double log_likelihood(std::span<const std::size_t>, const Vector&) const override { return std::nan(""); }
      double log_prior(const Vector&) const override { return 0.0; }
      std::vector<std::string> names_ = default_param_names(2);
      std::vector<Transform> t_ = {Transform::identity, Transform::identity};
    } nan_model;
    CHECK_THROWS_AS(mh_stage_joint(nan_model, RowIndices{0}, prev, config(0.5, 100)), Error);
  }
  SUBCASE("marginal KDE proposals") {
    StageConfig c = config(0.0, 1000);
    c.kernel_kind = KernelKind::marginal_kde;
    const auto r = mh_stage_joint(flat, batch, prev, c);
    CHECK(r.stats.acceptance_rate == 1.0);
    CHECK(r.stats.unique_count == 1000);
  }
}

TEST_CASE("mh_stage_blocked examples") {
  const Matrix cov = (Matrix(2, 2) << 1.0, 0.3, 0.3, 1.0).finished();
  const ParticleSet prev = gaussian_particles(2000, Vector::Zero(2), cov, 7);

  SUBCASE("one block reproduces the joint stage") {
    const auto sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 10, 8);
    const ConjugateGaussianModel model(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, sim.observations);
    for (double lambda : {0.0, 0.6, 1.0}) {
      StageConfig c = config(lambda, 800);
      const auto joint = mh_stage_joint(model, all_rows(10), prev, c);
      c.blocks = BlockStructure::joint(2);
      const auto blocked = mh_stage_blocked(model, all_rows(10), prev, c);
      CHECK(joint.particles.values() == blocked.particles.values());
    }
  }
  SUBCASE("flat likelihood Gibbs sweep keeps the kernel moments") {
    const FlatModel flat(2);
    StageConfig c = config(0.0, 20000);
    c.blocks = BlockStructure({{0}, {1}}, 2);
    const auto r = mh_stage_blocked(flat, RowIndices{0}, prev, c);
    CHECK(r.stats.block_acceptance == std::vector<double>{1.0, 1.0});
    const Moments target = estimate_moments(prev);
    const Moments got = estimate_moments(r.particles);
    // Two-block Gibbs on a Gaussian has lag-one autocorrelation rho^2.
    const double rho2 = std::pow(target.cov(0, 1), 2) / (target.cov(0, 0) * target.cov(1, 1));
    const double inflation = std::sqrt((1.0 + rho2) / (1.0 - rho2));
    for (Eigen::Index a = 0; a < 2; ++a) {
      CHECK(std::abs(got.mean(a) - target.mean(a)) < 4.0 * inflation * std::sqrt(target.cov(a, a) / 20000.0));
      for (Eigen::Index b = 0; b < 2; ++b) {
        const double se = std::sqrt((target.cov(a, a) * target.cov(b, b) + std::pow(target.cov(a, b), 2)) / 20000.0);
        CHECK(std::abs(got.cov(a, b) - target.cov(a, b)) < 4.0 * inflation * se);
      }
    }
  }
  SUBCASE("conjugate posterior with scalar blocks") {
    const Matrix prior_cov = (Matrix(2, 2) << 1.0, 0.5, 0.5, 2.0).finished();
    const auto sim = conjugate_simulate(Vector::Zero(2), prior_cov, 1.0, 60, 9);
    const ConjugateGaussianModel model(Vector::Zero(2), prior_cov, 1.0, sim.observations);
    const DataPartition partition(consecutive_batches(60, 3), 60);
    StageConfig c = config(0.0, 10000);
    c.blocks = BlockStructure({{0}, {1}}, 2);
    const auto run = run_recursive(model, partition, c, exact_stage1(model, partition.batch(0), 10000, 10));
    const auto post = conjugate_posterior(model, all_rows(60));
    for (Eigen::Index p = 0; p < 2; ++p) {
      const double sd = std::sqrt(post.cov(p, p));
      const double d = ks_distance(column(run.stages.back().values(), p),
                                   [&](double x) { return std_normal_cdf((x - post.mean(p)) / sd); });
      CHECK(d < 0.03);
    }
  }
  SUBCASE("lambda = 1 with several blocks is rejected") {
    StageConfig c = config(1.0, 100);
    c.blocks = BlockStructure({{0}, {1}}, 2);
    CHECK_THROWS_WITH(mh_stage_blocked(FlatModel(2), RowIndices{0}, prev, c), doctest::Contains("blocking requires lambda < 1"));
  }
}

TEST_CASE("run_recursive") {
  const auto sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 40, 11);
  const ConjugateGaussianModel model(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, sim.observations);
  const ParticleSet stage1 = gaussian_particles(400, Vector::Zero(2), Matrix::Identity(2, 2), 12);

  SUBCASE("one batch returns stage 1") {
    const auto run = run_recursive(model, DataPartition({all_rows(40)}, 40), config(0.0, 400), stage1);
    REQUIRE(run.stages.size() == 1);
    CHECK(run.stages[0].values() == stage1.values());
    CHECK(run.stats.empty());
  }
  SUBCASE("observer sees each stage and failures keep earlier stages") {
    const FailingModel failing(3);
    const DataPartition partition({{0}, {1}, {2}, {3}}, 4);
    const ParticleSet one = gaussian_particles(40, Vector::Zero(1), Matrix::Identity(1, 1), 13);
    std::vector<int> seen;
    CHECK_THROWS_AS(run_recursive(failing, partition, config(0.5, 40), one,
                                  [&](const ParticleSet& s, const StageStats& st) {
                                    seen.push_back(st.stage);
                                    CHECK(s.stage() == st.stage);
                                  }),
                    Error);
    CHECK(seen == std::vector<int>{2, 3});
  }
}

TEST_SUITE("invariants") {
  TEST_CASE("seed determinism") {
    const auto sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 40, 14);
    const ConjugateGaussianModel model(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, sim.observations);
    const DataPartition partition(consecutive_batches(40, 4), 40);
    const ParticleSet stage1 = gaussian_particles(400, Vector::Zero(2), Matrix::Identity(2, 2), 15);
    for (bool blocked : {false, true}) {
      StageConfig c = config(0.4, 400, 77);
      if (blocked) c.blocks = BlockStructure({{0}, {1}}, 2);
      const auto a = run_recursive(model, partition, c, stage1);
      const auto b = run_recursive(model, partition, c, stage1);
      for (std::size_t s = 0; s < a.stages.size(); ++s) CHECK(a.stages[s].values() == b.stages[s].values());
      c.seed = 78;
      const auto other = run_recursive(model, partition, c, stage1);
      CHECK(other.stages.back().values() != a.stages.back().values());
    }
  }

  TEST_CASE("depletion is monotone at lambda = 1") {
    const auto sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 80, 16);
    const ConjugateGaussianModel model(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, sim.observations);
    const DataPartition partition(consecutive_batches(80, 8), 80);
    const ParticleSet stage1 = exact_stage1(model, partition.batch(0), 1000, 17);
    const auto run = run_recursive(model, partition, config(1.0, 1000), stage1);
    for (std::size_t s = 1; s < run.stages.size(); ++s) {
      CHECK(run.stages[s].unique_count() <= run.stages[s - 1].unique_count());
    }
  }

  TEST_CASE("proposals are distinct for lambda < 1") {
    const auto sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 40, 18);
    const ConjugateGaussianModel model(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, sim.observations);
    const ParticleSet prev = gaussian_particles(500, Vector::Zero(2), Matrix::Identity(2, 2), 19);
    for (double lambda : {0.0, 0.9, 0.99}) {
      StageConfig c = config(lambda, 2000);
      auto r = mh_stage_joint(model, all_rows(40), prev, c);
      CHECK(r.stats.unique_proposals == r.stats.proposals);
      c.blocks = BlockStructure({{0}, {1}}, 2);
      r = mh_stage_blocked(model, all_rows(40), prev, c);
      CHECK(r.stats.unique_proposals == r.stats.proposals);
    }
  }

  TEST_CASE("empty batch leaves the kernel law") {
    const auto sim = conjugate_simulate(Vector::Zero(1), Matrix::Identity(1, 1), 1.0, 5, 20);
    const ConjugateGaussianModel model(Vector::Zero(1), Matrix::Identity(1, 1), 1.0, sim.observations);
    const ParticleSet prev = gaussian_particles(5000, Vector::Constant(1, 0.3), Matrix::Identity(1, 1) * 2.0, 21);
    const auto r = mh_stage_joint(model, RowIndices{}, prev, config(0.0, 8000));
    CHECK(r.stats.acceptance_rate == 1.0);
    const auto k = build_kernel(prev, 0.0);
    const double m = k.mean()(0);
    const double sd = std::sqrt(k.cov()(0, 0));
    CHECK(ks_distance(column(r.particles.values(), 0), [&](double x) { return std_normal_cdf((x - m) / sd); }) <
          ks_critical_01(8000));
  }

  TEST_CASE("detailed balance of the independence sampler") {
    // P = 1, lambda = 0: proposal q = N(m, s^2), batch likelihood L Gaussian,
    // target pi ∝ q L. Summarize the state as A = {theta < c} and B = its
    // complement, and compare the empirical transition rates with quadrature
    // of the MH kernel. Balance pi(A) T(A->B) = pi(B) T(B->A) is checked on
    // the quadrature and the empirical rates must match it.
    const Matrix obs = (Matrix(3, 1) << 0.9, 1.4, 0.2).finished();
    const ConjugateGaussianModel model(Vector::Zero(1), Matrix::Identity(1, 1), 1.0, obs);
    const ParticleSet prev = gaussian_particles(4000, Vector::Zero(1), Matrix::Identity(1, 1), 22);
    StageConfig c = config(0.0, 60000);
    c.chains = 1;
    const auto r = mh_stage_joint(model, all_rows(3), prev, c);

    const auto k = build_kernel(prev, 0.0);
    const double m = k.mean()(0);
    const double s2 = k.cov()(0, 0);
    auto loglik = [&](double t) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < 3; ++i) acc += -0.5 * (obs(i, 0) - t) * (obs(i, 0) - t);
      return acc;
    };
    const double cut = 0.5;
    const int n = 1200;
    const double lo = m - 8.0 * std::sqrt(s2);
    const double h = 16.0 * std::sqrt(s2) / n;
    std::vector<double> x(n), q(n), pi(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      x[std::size_t(i)] = lo + (i + 0.5) * h;
      q[std::size_t(i)] = normal_pdf(x[std::size_t(i)], m, s2) * h;
      pi[std::size_t(i)] = q[std::size_t(i)] * std::exp(loglik(x[std::size_t(i)]));
      z += pi[std::size_t(i)];
    }
    double flux_ab = 0.0;
    double flux_ba = 0.0;
    double pi_a = 0.0;
    for (int i = 0; i < n; ++i) {
      const double pxi = pi[std::size_t(i)] / z;
      if (x[std::size_t(i)] < cut) pi_a += pxi;
      for (int j = 0; j < n; ++j) {
        const bool from_a = x[std::size_t(i)] < cut;
        const bool to_a = x[std::size_t(j)] < cut;
        if (from_a == to_a) continue;
        const double a = std::min(1.0, std::exp(loglik(x[std::size_t(j)]) - loglik(x[std::size_t(i)])));
        (from_a ? flux_ab : flux_ba) += pxi * q[std::size_t(j)] * a;
      }
    }
    CHECK(flux_ab == doctest::Approx(flux_ba).epsilon(1e-6));

    const Matrix& v = r.particles.values();
    double count_a = 0.0;
    double ab = 0.0;
    double ba = 0.0;
    for (Eigen::Index t = 0; t + 1 < v.rows(); ++t) {
      const bool a = v(t, 0) < cut;
      const bool b = v(t + 1, 0) < cut;
      count_a += a ? 1.0 : 0.0;
      if (a && !b) ab += 1.0;
      if (!a && b) ba += 1.0;
    }
    const double steps = double(v.rows() - 1);
    const double t_ab = ab / count_a;
    const double t_ba = ba / (steps - count_a);
    const double se_ab = std::sqrt(t_ab * (1.0 - t_ab) / count_a);
    const double se_ba = std::sqrt(t_ba * (1.0 - t_ba) / (steps - count_a));
    CHECK(std::abs(t_ab - flux_ab / pi_a) < 5.0 * se_ab);
    CHECK(std::abs(t_ba - flux_ba / (1.0 - pi_a)) < 5.0 * se_ba);
  }
}
