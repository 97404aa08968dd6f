#include "ripple/diagnostics/convergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ripple {

double split_rhat(const std::vector<Vector>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("split_rhat needs at least two chains");
  std::vector<Vector> halves;
  Eigen::Index n = -1;
  for (const Vector& c : chains) {
    const Eigen::Index half = c.size() / 2;
    if (half < 2) throw std::invalid_argument("split_rhat needs chains of length >= 4");
    if (n < 0 || half < n) n = half;
  }
  for (const Vector& c : chains) {
    halves.push_back(c.head(n));
    halves.push_back(c.segment(c.size() - n, n));
  }
  const double m = static_cast<double>(halves.size());
  const double len = static_cast<double>(n);
  Vector means(static_cast<Eigen::Index>(halves.size()));
  double w = 0.0;
  for (std::size_t k = 0; k < halves.size(); ++k) {
    const double mu = halves[k].mean();
    means(static_cast<Eigen::Index>(k)) = mu;
    w += (halves[k].array() - mu).square().sum() / (len - 1.0);
  }
  w /= m;
  const double grand = means.mean();
  const double b = len * (means.array() - grand).square().sum() / (m - 1.0);
  if (w == 0.0) return b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double var_plus = (len - 1.0) / len * w + b / len;
  return std::sqrt(var_plus / w);
}

Vector split_rhat_columns(const std::vector<Matrix>& chains) {
  if (chains.empty()) throw std::invalid_argument("split_rhat_columns: no chains");
  Vector out(chains.front().cols());
  for (Eigen::Index p = 0; p < out.size(); ++p) {
    std::vector<Vector> cols;
    for (const Matrix& c : chains) cols.push_back(c.col(p));
    out(p) = split_rhat(cols);
  }
  return out;
}

}  // namespace ripple
