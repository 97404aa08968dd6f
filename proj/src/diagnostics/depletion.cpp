#include "ripple/diagnostics/depletion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ripple/core/random.hpp"
#include "ripple/smoothing/kernel.hpp"
#include "ripple/smoothing/marginal_kde.hpp"

namespace ripple {

double expected_unique_after_resample(Eigen::Index m) {
  const double mm = static_cast<double>(m);
  return mm * (1.0 - std::pow(1.0 - 1.0 / mm, mm));
}

DepletionDemo depletion_demo(Eigen::Index m, int rounds, std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("depletion_demo: M must be >= 2");
  if (rounds < 0) throw std::invalid_argument("depletion_demo: rounds must be >= 0");
  RandomStream rng(seed, {0xDE9});

  Matrix values(m, 2);
  const Eigen::Index first = (m + 1) / 2;
  const double c = std::sqrt(1.0 - 0.9 * 0.9);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    if (i < first) {
      values(i, 0) = 0.25 + z1;
      values(i, 1) = z2;
    } else {
      values(i, 0) = z1;
      values(i, 1) = 2.0 + 0.9 * z1 + c * z2;
    }
  }
  const std::vector<std::string> names{"theta1", "theta2"};
  DepletionDemo demo{ParticleSet(values, names), ParticleSet(values, names), {}, {}};
  demo.trace.push_back(demo.original.unique_count());

  Matrix current = values;
  for (int r = 0; r < rounds; ++r) {
    Matrix next(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
      next.row(i) = current.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(m))));
    }
    current = std::move(next);
    demo.trace.push_back(count_unique_rows(current));
  }
  demo.final = ParticleSet(current, names, 1 + rounds);

  for (double lambda : {0.0, 0.5, 0.75, 0.9, 0.95, 0.99, 1.0}) {
    const SmoothedKernel kernel = build_kernel(demo.final, lambda);
    Matrix out(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) out.row(i) = sample_joint(kernel, rng).transpose();
    std::ostringstream label;
    label << "lambda=" << lambda;
    demo.refreshed.push_back({label.str(), std::move(out)});
  }
  const MarginalKdeKernel kde = build_marginal_kde_kernel(demo.final);
  Matrix out(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) out.row(i) = sample_marginal_kde(kde, rng).transpose();
  demo.refreshed.push_back({"marginal_kde", std::move(out)});
  return demo;
}

}  // namespace ripple
