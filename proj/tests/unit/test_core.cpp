#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <limits>
#include <set>

#include "ripple/core/error.hpp"
#include "ripple/core/linalg.hpp"
#include "ripple/core/parallel.hpp"
#include "ripple/core/random.hpp"
#include "support.hpp"

using namespace ripple;

TEST_CASE("random streams") {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  CHECK(RandomStream(7, {1, 2}).uniform() == RandomStream(derive_seed(7, {1, 2})).uniform());

  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 10; ++s) {
    for (std::uint64_t c = 0; c < 10; ++c) seeds.insert(derive_seed(1, {s, c}));
  }
  CHECK(seeds.size() == 100);
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));

  RandomStream r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.index(5) < 5);
  }
}

TEST_CASE("scalar helpers") {
  const std::vector<double> v{-1000.0, -1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)));
  const std::vector<double> none{-std::numeric_limits<double>::infinity()};
  CHECK(log_sum_exp(none) == -std::numeric_limits<double>::infinity());
  CHECK(log1p_exp(800.0) == doctest::Approx(800.0));
  CHECK(log1p_exp(-800.0) >= 0.0);
  CHECK(log1p_exp(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96) == doctest::Approx(testing::std_normal_cdf(1.96)).epsilon(1e-12));
  CHECK(normal_log_pdf(1.0, 0.0, 2.0) == doctest::Approx(std::log(testing::normal_pdf(1.0, 0.0, 4.0))));
}

TEST_CASE("cholesky and Gaussian density") {
  Matrix a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  const auto f = cholesky_with_jitter(a, "test");
  CHECK(f.jitter == 0.0);
  CHECK(f.log_det == doctest::Approx(std::log(a.determinant())));
  const Vector x = (Vector(2) << 0.3, -0.4).finished();
  const Vector m = (Vector(2) << 0.1, 0.2).finished();
  CHECK(mvn_log_density(x, m, f) ==
        doctest::Approx(std::log(testing::bivariate_pdf(0.3, -0.4, 0.1, 0.2, 2.0, 0.5, 1.0))).epsilon(1e-12));

  // Rank one: the ladder recovers with a small ridge.
  Matrix r(2, 2);
  r << 1.0, 1.0, 1.0, 1.0;
  const auto fr = cholesky_with_jitter(r, "rank one");
  CHECK(fr.jitter > 0.0);
  CHECK(fr.jitter <= 1e-8 * 256);

  Matrix neg = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(cholesky_with_jitter(neg, "negative"), DegenerateCovariance);
  CHECK(cholesky_with_jitter(Matrix(0, 0), "empty").dim() == 0);
}

TEST_CASE("parallel_for") {
  std::vector<int> out(50, 0);
  parallel_for(50, [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
  for (std::size_t i = 0; i < 50; ++i) CHECK(out[i] == int(i) * 2);

  CHECK_THROWS_WITH(parallel_for(10,
                                 [](std::size_t i) {
                                   if (i == 3 || i == 7) throw std::runtime_error("task " + std::to_string(i));
                                 }),
                    "task 3");
  CHECK(worker_limit() >= 1);
}
