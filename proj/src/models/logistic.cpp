#include "ripple/models/logistic.hpp"

#include <cmath>
#include <stdexcept>

#include "ripple/core/random.hpp"

namespace ripple {

LogisticModel::LogisticModel(Eigen::Index p, double sigma_beta2, LogisticData data)
    : p_(p), sigma_beta2_(sigma_beta2), data_(std::move(data)) {
  if (p_ < 1) throw std::invalid_argument("logistic model needs P >= 1");
  if (!(sigma_beta2_ > 0.0)) throw std::invalid_argument("logistic model needs sigma_beta2 > 0");
  if (data_.x.cols() != p_ || data_.x.rows() != data_.y.size()) {
    throw std::invalid_argument("logistic data: design is " + std::to_string(data_.x.rows()) + "x" +
                                std::to_string(data_.x.cols()) + ", expected " +
                                std::to_string(data_.y.size()) + "x" + std::to_string(p_));
  }
  for (Eigen::Index i = 0; i < data_.y.size(); ++i) {
    if (data_.y(i) != 0.0 && data_.y(i) != 1.0) {
      throw std::invalid_argument("logistic data: y must be 0 or 1 (row " + std::to_string(i) + ")");
    }
  }
  for (Eigen::Index j = 0; j < p_; ++j) names_.push_back("beta" + std::to_string(j));
  transforms_.assign(static_cast<std::size_t>(p_), Transform::identity);
}

double LogisticModel::log_likelihood(std::span<const std::size_t> rows, const Vector& beta) const {
  return logistic_log_likelihood(*this, rows, beta);
}

double LogisticModel::log_prior(const Vector& beta) const {
  double acc = 0.0;
  const double sd = std::sqrt(sigma_beta2_);
  for (Eigen::Index j = 0; j < beta.size(); ++j) acc += normal_log_pdf(beta(j), 0.0, sd);
  return acc;
}

double logistic_log_likelihood(const LogisticModel& model, std::span<const std::size_t> rows,
                               const Vector& beta) {
  if (beta.size() != model.dim()) throw std::invalid_argument("logistic: beta has wrong dimension");
  const LogisticData& d = model.data();
  double acc = 0.0;
  for (std::size_t r : rows) {
    const auto i = static_cast<Eigen::Index>(r);
    const double eta = d.x.row(i).dot(beta);
    acc += d.y(i) * eta - log1p_exp(eta);
  }
  return acc;
}

Vector logistic_log_likelihood_gradient(const LogisticModel& model,
                                        std::span<const std::size_t> rows, const Vector& beta) {
  const LogisticData& d = model.data();
  Vector grad = Vector::Zero(model.dim());
  for (std::size_t r : rows) {
    const auto i = static_cast<Eigen::Index>(r);
    const double eta = d.x.row(i).dot(beta);
    grad += (d.y(i) - 1.0 / (1.0 + std::exp(-eta))) * d.x.row(i).transpose();
  }
  return grad;
}

LogisticSimulation logistic_simulate(Eigen::Index p, double sigma_beta2, std::size_t n,
                                     std::uint64_t seed, const std::optional<Vector>& forced_beta) {
  if (n < 1) throw std::invalid_argument("logistic_simulate: n must be >= 1");
  if (p < 1) throw std::invalid_argument("logistic_simulate: P must be >= 1");
  RandomStream rng(seed, {0x10615});
  LogisticSimulation sim;
  if (forced_beta) {
    if (forced_beta->size() != p) throw std::invalid_argument("logistic_simulate: forced beta size");
    sim.true_beta = *forced_beta;
  } else {
    sim.true_beta = std::sqrt(sigma_beta2) * rng.standard_normal(p);
  }
  const auto rows = static_cast<Eigen::Index>(n);
  sim.data.x.resize(rows, p);
  sim.data.y.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    sim.data.x(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < p; ++j) sim.data.x(i, j) = rng.normal();
    const double prob = 1.0 / (1.0 + std::exp(-sim.data.x.row(i).dot(sim.true_beta)));
    sim.data.y(i) = rng.uniform() < prob ? 1.0 : 0.0;
  }
  return sim;
}

}  // namespace ripple
