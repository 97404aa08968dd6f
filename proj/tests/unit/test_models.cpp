#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "ripple/core/log.hpp"
#include "ripple/models/bspline.hpp"
#include "ripple/models/conjugate.hpp"
#include "ripple/models/logistic.hpp"
#include "ripple/models/sdm.hpp"
#include "support.hpp"

using namespace ripple;
using namespace ripple::testing;

namespace {

LogisticModel random_logistic(std::size_t n, std::uint64_t seed) {
  auto sim = logistic_simulate(4, 1.0, n, seed);
  return LogisticModel(4, 1.0, sim.data);
}

SdmConfig small_sdm_config(int k) {
  SdmConfig c;
  c.categories = k;
  c.predictors = 2;
  c.basis_wavelength = 4;
  c.basis_day = 4;
  return c;
}

SdmData random_sdm_data(int sites, int records, int predictors, std::uint64_t seed) {
  RandomStream rng(seed);
  SdmData data;
  for (int j = 0; j < sites; ++j) {
    SdmSite s;
    s.x = Vector::Ones(predictors);
    for (int p = 1; p < predictors; ++p) s.x(p) = rng.normal();
    for (int i = 0; i < records; ++i) {
      s.records.push_back({rng.normal(), 400.0 + 2000.0 * rng.uniform(), 365.0 * rng.uniform()});
    }
    data.sites.push_back(s);
  }
  return data;
}

Vector random_theta(Eigen::Index dim, std::uint64_t seed) {
  RandomStream rng(seed);
  return rng.standard_normal(dim) * 0.5;
}

}  // namespace

TEST_CASE("logistic_log_likelihood examples") {
  const LogisticModel model = random_logistic(20, 3);
  const auto rows = all_rows(20);
  CHECK(logistic_log_likelihood(model, rows, Vector::Zero(4)) == doctest::Approx(20.0 * std::log(0.5)).epsilon(1e-14));

  LogisticData one{Vector::Ones(1), Matrix::Zero(1, 2)};
  one.x(0, 0) = 1.0;
  const LogisticModel single(2, 1.0, one);
  CHECK(single.log_likelihood(all_rows(1), (Vector(2) << 0.0, 3.0).finished()) == doctest::Approx(std::log(0.5)));

  const Vector beta = random_theta(4, 4) * 3.0;
  double naive = 0.0;
  for (Eigen::Index i = 0; i < 20; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-model.data().x.row(i).dot(beta)));
    naive += model.data().y(i) == 1.0 ? std::log(p) : std::log(1.0 - p);
  }
  CHECK(logistic_log_likelihood(model, rows, beta) == doctest::Approx(naive).epsilon(1e-12));
  CHECK_THROWS_AS(logistic_log_likelihood(model, rows, Vector::Zero(3)), std::invalid_argument);

  // Extreme linear predictors stay finite.
  CHECK(std::isfinite(single.log_likelihood(all_rows(1), (Vector(2) << -800.0, 0.0).finished())));
}

TEST_CASE("logistic_simulate") {
  const auto a = logistic_simulate(6, 1.0, 380, 17);
  const auto b = logistic_simulate(6, 1.0, 380, 17);
  CHECK(a.data.x.rows() == 380);
  CHECK(a.data.x.cols() == 6);
  CHECK(a.data.x.col(0).isOnes());
  CHECK(a.data.x == b.data.x);
  CHECK(a.data.y == b.data.y);
  CHECK(a.true_beta == b.true_beta);
  CHECK(logistic_simulate(6, 1.0, 380, 18).data.x != a.data.x);

  const auto flat = logistic_simulate(3, 1.0, 100000, 19, Vector::Zero(3));
  CHECK(std::abs(flat.data.y.mean() - 0.5) < 0.006);
  CHECK(flat.true_beta.isZero(0.0));
}

TEST_CASE("multinomial_probs examples") {
  const Vector p3 = multinomial_probs(Vector::Ones(2));
  for (int k = 0; k < 3; ++k) CHECK(p3(k) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const Vector p2 = multinomial_probs(Vector::Ones(1));
  CHECK(p2(0) == doctest::Approx(0.5));
  CHECK(p2(1) == doctest::Approx(0.5));
  RandomStream rng(5);
  for (int t = 0; t < 100; ++t) {
    const Vector eta = (rng.standard_normal(4) * 3.0).array().exp();
    CHECK(std::abs(multinomial_probs(eta).sum() - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(multinomial_probs((Vector(2) << 1.0, 0.0).finished()), std::invalid_argument);
  CHECK_THROWS_AS(multinomial_probs((Vector(2) << 1.0, -2.0).finished()), std::invalid_argument);
}

TEST_CASE("B-spline basis") {
  SUBCASE("paper basis count") {
    SdmConfig c;
    CHECK(c.make_basis().count() == 64);
  }
  SUBCASE("linear surfaces are reproduced") {
    const TensorBasis basis(BSplineBasis(8, 400, 2400), BSplineBasis(8, 0, 365));
    const Vector gw = basis.wavelength().greville();
    const Vector gd = basis.day().greville();
    Vector coef(64);
    for (int iw = 0; iw < 8; ++iw) {
      for (int id = 0; id < 8; ++id) coef(iw * 8 + id) = 1.5 - 0.002 * gw(iw) + 0.01 * gd(id);
    }
    RandomStream rng(6);
    for (int t = 0; t < 200; ++t) {
      const double w = 400.0 + 2000.0 * rng.uniform();
      const double d = 365.0 * rng.uniform();
      CHECK(std::abs(sdm_basis_eval(basis, w, d).dot(coef) - (1.5 - 0.002 * w + 0.01 * d)) < 1e-8);
    }
  }
  SUBCASE("clamping outside the domain warns") {
    const TensorBasis basis(BSplineBasis(4, 0, 1), BSplineBasis(4, 0, 1));
    set_warnings_quiet(true);
    const std::size_t before = warning_count();
    bool clamped = false;
    const Vector g = basis.evaluate(1.5, -0.2, &clamped);
    set_warnings_quiet(false);
    CHECK(clamped);
    CHECK(warning_count() == before + 1);
    CHECK((g - basis.evaluate(1.0, 0.0)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(BSplineBasis(3, 0, 1), std::invalid_argument);
}

TEST_CASE("sdm_log_likelihood examples") {
  SUBCASE("one class is a plain Gaussian likelihood") {
    const SdmModel model(small_sdm_config(1), random_sdm_data(3, 5, 2, 7));
    const Vector theta = random_theta(model.dim(), 8);
    const double sigma2 = std::exp(theta(model.sigma2_index()));
    double oracle = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      for (const auto& rec : model.data().sites[j].records) {
        const Vector g = model.basis().evaluate(rec.w, rec.d);
        double mean = 0.0;
        for (int l = 0; l < 16; ++l) mean += g(l) * theta(model.gamma_index(l, 0));
        oracle += std::log(normal_pdf(rec.r, mean, sigma2));
      }
    }
    CHECK(sdm_log_likelihood(model, all_rows(3), theta) == doctest::Approx(oracle).epsilon(1e-12));
  }
  SUBCASE("identical class signatures make beta irrelevant") {
    const SdmModel model(small_sdm_config(3), random_sdm_data(4, 6, 2, 9));
    Vector theta = random_theta(model.dim(), 10);
    for (int l = 0; l < 16; ++l) {
      for (int k = 1; k < 3; ++k) theta(model.gamma_index(l, k)) = theta(model.gamma_index(l, 0));
    }
    Vector other = theta;
    for (Eigen::Index i : model.beta_group()) other(i) += 1.7 * double(i + 1);
    CHECK(sdm_log_likelihood(model, all_rows(4), theta) ==
          doctest::Approx(sdm_log_likelihood(model, all_rows(4), other)).epsilon(1e-12));
  }
  SUBCASE("matches enumeration over class assignments") {
    const SdmModel model(small_sdm_config(2), random_sdm_data(2, 3, 2, 11));
    const Vector theta = random_theta(model.dim(), 12);
    const double sigma2 = std::exp(theta(model.sigma2_index()));
    // Per site and class: p_jk and the product of record densities.
    double p[2][2];
    double lik[2][2];
    for (int j = 0; j < 2; ++j) {
      const auto& site = model.data().sites[std::size_t(j)];
      const double eta = std::exp(site.x(0) * theta(model.beta_index(0, 0)) + site.x(1) * theta(model.beta_index(0, 1)));
      p[j][0] = eta / (1.0 + eta);
      p[j][1] = 1.0 / (1.0 + eta);
      for (int k = 0; k < 2; ++k) {
        lik[j][k] = 1.0;
        for (const auto& rec : site.records) {
          const Vector g = model.basis().evaluate(rec.w, rec.d);
          double mean = 0.0;
          for (int l = 0; l < 16; ++l) mean += g(l) * theta(model.gamma_index(l, k));
          lik[j][k] *= normal_pdf(rec.r, mean, sigma2);
        }
      }
    }
    double total = 0.0;
    for (int z0 = 0; z0 < 2; ++z0) {
      for (int z1 = 0; z1 < 2; ++z1) total += p[0][z0] * lik[0][z0] * p[1][z1] * lik[1][z1];
    }
    CHECK(sdm_log_likelihood(model, all_rows(2), theta) == doctest::Approx(std::log(total)).epsilon(1e-12));
  }
}

TEST_CASE("sdm_predict_z examples") {
  SUBCASE("no records returns the prior probabilities") {
    SdmData data = random_sdm_data(1, 0, 3, 13);
    SdmConfig c = small_sdm_config(3);
    c.predictors = 3;
    const SdmModel m3(c, data);
    const Vector theta = random_theta(m3.dim(), 14);
    const Matrix beta = m3.unpack_beta(theta);
    const Vector eta = (beta.transpose() * data.sites[0].x).array().exp();
    CHECK((sdm_predict_z(m3, 0, theta) - multinomial_probs(eta)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("identical signatures return the prior probabilities") {
    const SdmModel model(small_sdm_config(3), random_sdm_data(1, 6, 2, 15));
    Vector theta = random_theta(model.dim(), 16);
    for (int l = 0; l < 16; ++l) {
      for (int k = 1; k < 3; ++k) theta(model.gamma_index(l, k)) = theta(model.gamma_index(l, 0));
    }
    const Vector eta = (model.unpack_beta(theta).transpose() * model.data().sites[0].x).array().exp();
    CHECK((sdm_predict_z(model, 0, theta) - multinomial_probs(eta)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("two-class Bayes update") {
    const SdmModel model(small_sdm_config(2), random_sdm_data(1, 4, 2, 17));
    const Vector theta = random_theta(model.dim(), 18);
    const auto& site = model.data().sites[0];
    const double sigma2 = std::exp(theta(model.sigma2_index()));
    const double eta = std::exp(site.x.dot(theta.head(2)));
    double post[2] = {eta / (1.0 + eta), 1.0 / (1.0 + eta)};
    for (int k = 0; k < 2; ++k) {
      for (const auto& rec : site.records) {
        const Vector g = model.basis().evaluate(rec.w, rec.d);
        double mean = 0.0;
        for (int l = 0; l < 16; ++l) mean += g(l) * theta(model.gamma_index(l, k));
        post[k] *= normal_pdf(rec.r, mean, sigma2);
      }
    }
    const Vector z = sdm_predict_z(model, 0, theta);
    CHECK(z(0) == doctest::Approx(post[0] / (post[0] + post[1])).epsilon(1e-12));
    CHECK(z(1) == doctest::Approx(post[1] / (post[0] + post[1])).epsilon(1e-12));
  }
}

TEST_CASE("sdm_simulate") {
  SdmConfig c;
  const auto a = sdm_simulate(c, 24, 21);
  const SdmModel model(c, a.data);
  CHECK(a.data.sites.size() == 576);
  // P(K - 1) + LK + 1 = 6 + 192 + 1.
  CHECK(model.dim() == 199);
  CHECK(a.true_theta.size() == 199);
  CHECK(a.true_z.size() == 576);
  CHECK(std::isfinite(model.log_likelihood(all_rows(576), a.true_theta)));
  CHECK(std::isfinite(model.log_prior(a.true_theta)));

  const auto b = sdm_simulate(c, 24, 21);
  CHECK(a.true_theta == b.true_theta);
  CHECK(a.true_z == b.true_z);
  CHECK(a.data.sites[100].records.size() == b.data.sites[100].records.size());
  CHECK(a.data.sites[100].records[3].r == b.data.sites[100].records[3].r);

  const auto uniform = sdm_simulate(c, 100, 22, true);
  std::vector<double> counts(3, 0.0);
  for (int z : uniform.true_z) counts[std::size_t(z)] += 1.0;
  const double se = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / 10000.0);
  for (double n : counts) CHECK(std::abs(n / 10000.0 - 1.0 / 3.0) < 4.0 * se);
}

TEST_CASE("sdm default blocks") {
  SdmConfig c;
  c.basis_wavelength = 4;
  c.basis_day = 4;
  const SdmModel model(c, random_sdm_data(2, 2, 3, 23));
  const auto blocks = model.default_blocks();
  CHECK(blocks.size() == 18);
  CHECK(blocks.front().size() == 6);
  CHECK(blocks.back() == std::vector<Eigen::Index>{model.sigma2_index()});
  CHECK(model.param_names().back() == "sigma2");
  CHECK(model.transforms().back() == Transform::log);
}

TEST_CASE("conjugate_posterior examples") {
  const Matrix obs = (Matrix(1, 1) << 1.4).finished();
  const ConjugateGaussianModel model(Vector::Zero(1), Matrix::Identity(1, 1), 1.0, obs);
  const auto prior = conjugate_posterior(model, RowIndices{});
  CHECK(prior.mean(0) == 0.0);
  CHECK(prior.cov(0, 0) == 1.0);
  const auto post = conjugate_posterior(model, all_rows(1));
  CHECK(post.mean(0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(post.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  const auto sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2) * 2.0, 0.5, 30, 24);
  const ConjugateGaussianModel m2(Vector::Zero(2), Matrix::Identity(2, 2) * 2.0, 0.5, sim.observations);
  const auto all = conjugate_posterior(m2, all_rows(30));
  GaussianPosterior running = conjugate_posterior(m2, RowIndices{});
  for (std::size_t start = 0; start < 30; start += 10) {
    RowIndices rows(10);
    std::iota(rows.begin(), rows.end(), start);
    running = conjugate_update(running, 0.5, sim.observations, rows);
  }
  CHECK((running.mean - all.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((running.cov - all.cov).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transforms round trip") {
  for (double x : {-3.0, 0.0, 2.5}) {
    CHECK(to_unconstrained(Transform::log, to_constrained(Transform::log, x)) == doctest::Approx(x));
    CHECK(to_unconstrained(Transform::logit, to_constrained(Transform::logit, x)) == doctest::Approx(x));
    CHECK(to_constrained(Transform::identity, x) == x);
  }
}

TEST_SUITE("invariants") {
  TEST_CASE("batch additivity") {
    const LogisticModel logistic = random_logistic(50, 31);
    const SdmModel sdm(small_sdm_config(3), random_sdm_data(12, 5, 2, 32));
    const auto conj_sim = conjugate_simulate(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, 40, 33);
    const ConjugateGaussianModel conj(Vector::Zero(2), Matrix::Identity(2, 2), 1.0, conj_sim.observations);
    const std::vector<const ModelSpec*> models{&logistic, &sdm, &conj};
    for (const ModelSpec* m : models) {
      const Vector theta = random_theta(m->dim(), 34);
      RowIndices rows = all_rows(m->row_count());
      const RowIndices first(rows.begin(), rows.begin() + long(rows.size() / 3));
      const RowIndices second(rows.begin() + long(rows.size() / 3), rows.end());
      const double whole = m->log_likelihood(rows, theta);
      const double split = m->log_likelihood(first, theta) + m->log_likelihood(second, theta);
      CHECK(std::abs(whole - split) <= 1e-10 * std::abs(whole));
      CHECK(m->log_likelihood(RowIndices{}, theta) == 0.0);
    }
  }

  TEST_CASE("logistic gradient check") {
    const LogisticModel model = random_logistic(60, 35);
    const auto rows = all_rows(60);
    const Vector beta = random_theta(4, 36);
    const Vector grad = logistic_log_likelihood_gradient(model, rows, beta);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const double h = 1e-6;
      Vector up = beta;
      Vector down = beta;
      up(i) += h;
      down(i) -= h;
      const double fd = (logistic_log_likelihood(model, rows, up) - logistic_log_likelihood(model, rows, down)) / (2 * h);
      CHECK(std::abs(fd - grad(i)) <= 1e-5 * std::abs(grad(i)));
    }
  }

  TEST_CASE("sdm likelihood ignores record order") {
    SdmData data = random_sdm_data(5, 7, 2, 37);
    const SdmModel a(small_sdm_config(3), data);
    for (auto& site : data.sites) std::reverse(site.records.begin(), site.records.end());
    std::swap(data.sites[2].records[1], data.sites[2].records[5]);
    const SdmModel b(small_sdm_config(3), data);
    const Vector theta = random_theta(a.dim(), 38);
    CHECK(a.log_likelihood(all_rows(5), theta) == doctest::Approx(b.log_likelihood(all_rows(5), theta)).epsilon(1e-13));
  }

  TEST_CASE("basis partition of unity") {
    SdmConfig c;
    const TensorBasis basis = c.make_basis();
    RandomStream rng(39);
    for (int t = 0; t < 500; ++t) {
      const Vector g = sdm_basis_eval(basis, 400.0 + 2000.0 * rng.uniform(), 365.0 * rng.uniform());
      CHECK(g.minCoeff() >= 0.0);
      CHECK(std::abs(g.sum() - 1.0) < 1e-12);
    }
    CHECK(std::abs(sdm_basis_eval(basis, 2400.0, 365.0).sum() - 1.0) < 1e-12);
    CHECK(std::abs(sdm_basis_eval(basis, 400.0, 0.0).sum() - 1.0) < 1e-12);
  }

  TEST_CASE("multinomial shift and monotonicity") {
    const Vector eta = (Vector(3) << 0.5, 2.0, 1.2).finished();
    const Vector p = multinomial_probs(eta);
    // A common shift c in x'beta_k scales every eta by exp(c).
    const Vector shifted = multinomial_probs(eta * std::exp(1.3));
    CHECK(std::abs(shifted.sum() - 1.0) < 1e-14);
    CHECK(shifted.minCoeff() > 0.0);
    for (Eigen::Index k = 0; k < 3; ++k) {
      Vector up = eta;
      up(k) *= 1.5;
      CHECK(multinomial_probs(up)(k) > p(k));
    }
  }
}
