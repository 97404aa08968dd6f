#pragma once

#include <cstdint>
#include <optional>

#include "ripple/models/model.hpp"

namespace ripple {

struct LogisticData {
  Vector y;  // 0/1 responses
  Matrix x;  // n x P design, first column is the intercept
};

// Bayesian logistic regression:
//   beta ~ N(0, sigma_beta2 I),  y_i | beta ~ Bernoulli(logit^{-1}(x_i' beta)).
class LogisticModel final : public ModelSpec {
 public:
  LogisticModel(Eigen::Index p, double sigma_beta2, LogisticData data);

  std::string kind() const override { return "logistic"; }
  Eigen::Index dim() const override { return p_; }
  const std::vector<std::string>& param_names() const override { return names_; }
  const std::vector<Transform>& transforms() const override { return transforms_; }
  std::size_t row_count() const override { return static_cast<std::size_t>(data_.y.size()); }
  double log_likelihood(std::span<const std::size_t> rows, const Vector& beta) const override;
  double log_prior(const Vector& beta) const override;

  double sigma_beta2() const { return sigma_beta2_; }
  const LogisticData& data() const { return data_; }

 private:
  Eigen::Index p_;
  double sigma_beta2_;
  LogisticData data_;
  std::vector<std::string> names_;
  std::vector<Transform> transforms_;
};

// sum_i [ y_i x_i' beta - log(1 + exp(x_i' beta)) ] over the given rows.
double logistic_log_likelihood(const LogisticModel& model, std::span<const std::size_t> rows,
                               const Vector& beta);

// Analytic gradient sum_i (y_i - logit^{-1}(x_i' beta)) x_i.
Vector logistic_log_likelihood_gradient(const LogisticModel& model,
                                        std::span<const std::size_t> rows, const Vector& beta);

struct LogisticSimulation {
  LogisticData data;
  Vector true_beta;
};

// Intercept plus P-1 independent standard-normal predictors; beta drawn from
// the prior unless `forced_beta` is given.
LogisticSimulation logistic_simulate(Eigen::Index p, double sigma_beta2, std::size_t n,
                                     std::uint64_t seed,
                                     const std::optional<Vector>& forced_beta = std::nullopt);

}  // namespace ripple
