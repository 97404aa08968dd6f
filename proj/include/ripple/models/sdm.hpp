#pragma once

#include <cstdint>
#include <optional>

#include "ripple/models/bspline.hpp"
#include "ripple/models/model.hpp"

namespace ripple {

// Hyperparameters and observation design of the species distribution model.
struct SdmConfig {
  int categories = 3;        // K
  int predictors = 3;        // P, including the intercept
  int basis_wavelength = 8;  // L_w
  int basis_day = 8;         // L_d
  double tau2_beta = 4.0;
  double tau2_gamma = 1.0;
  double rho = 0.9;          // correlation of gamma_{kl} and gamma_{k*l}
  double sigma_scale = 1.0;  // half-normal scale on sigma
  double wavelength_min = 400.0;
  double wavelength_max = 2400.0;
  double day_min = 0.0;
  double day_max = 365.0;
  int bands = 4;   // fixed wavelength grid
  int visits = 6;  // revisit days per site, uniform over the year

  int basis_count() const { return basis_wavelength * basis_day; }
  Eigen::Index parameter_count() const {
    return static_cast<Eigen::Index>(predictors * (categories - 1) + basis_count() * categories + 1);
  }
  TensorBasis make_basis() const;
};

struct ReflectanceRecord {
  double r;  // logit reflectance
  double w;  // wavelength
  double d;  // day of year
};

struct SdmSite {
  Vector x;  // predictors, x(0) = 1
  std::vector<ReflectanceRecord> records;
  std::optional<int> z_true;  // 0-based category, if known
};

struct SdmData {
  std::vector<SdmSite> sites;
};

// Latent-class model with z_j marginalized:
//
//   [r_j | theta] = sum_k p_jk prod_i N(r_ij | g(w_ij, d_ij)' gamma_k, sigma^2),
//   p_j = multinomial_probs(exp(x_j' beta_k), k < K),
//
// theta packs beta (k-major, K-1 blocks of P), gamma (basis-major, L blocks of
// K) and log sigma^2, in that order. Rows of the table are sites.
class SdmModel final : public ModelSpec {
 public:
  SdmModel(SdmConfig config, SdmData data);

  std::string kind() const override { return "sdm"; }
  Eigen::Index dim() const override { return config_.parameter_count(); }
  const std::vector<std::string>& param_names() const override { return names_; }
  const std::vector<Transform>& transforms() const override { return transforms_; }
  std::size_t row_count() const override { return data_.sites.size(); }
  double log_likelihood(std::span<const std::size_t> rows, const Vector& theta) const override;
  double log_prior(const Vector& theta) const override;

  const SdmConfig& config() const { return config_; }
  const SdmData& data() const { return data_; }
  const TensorBasis& basis() const { return basis_; }

  Eigen::Index beta_index(int k, int p) const { return k * config_.predictors + p; }
  Eigen::Index gamma_index(int l, int k) const {
    return config_.predictors * (config_.categories - 1) + l * config_.categories + k;
  }
  Eigen::Index sigma2_index() const { return dim() - 1; }

  // P x (K-1); column k is beta_k.
  Matrix unpack_beta(const Vector& theta) const;
  // L x K; column k is gamma_k.
  Matrix unpack_gamma(const Vector& theta) const;

  // log p_jk + sum_i log N(r_ij | .), one entry per category.
  Vector site_joint_log_terms(std::size_t site, const Vector& theta) const;
  Vector site_joint_log_terms(std::size_t site, const Matrix& beta, const Matrix& gamma,
                              double log_sigma2) const;

  // {all beta}, {gamma_l. for each basis l}, {log sigma^2}.
  std::vector<std::vector<Eigen::Index>> default_blocks() const;

  // Indices of the beta, gamma and sigma^2 groups.
  std::vector<Eigen::Index> beta_group() const;
  std::vector<Eigen::Index> gamma_group() const;

 private:
  SdmConfig config_;
  SdmData data_;
  TensorBasis basis_;
  std::vector<Matrix> site_basis_;      // N_j x L
  std::vector<Vector> site_reflectance_;  // N_j
  CholeskyFactor gamma_prior_factor_;
  std::vector<std::string> names_;
  std::vector<Transform> transforms_;
};

// p_k = eta_k / (1 + sum eta) for k < K, p_K = 1 / (1 + sum eta). Throws on
// non-positive eta.
Vector multinomial_probs(const Vector& eta);

double sdm_log_likelihood(const SdmModel& model, std::span<const std::size_t> rows,
                          const Vector& theta);

// Pr(z_j = k | r_j, theta); equals p_j when the site has no records.
Vector sdm_predict_z(const SdmModel& model, std::size_t site, const Vector& theta);

struct SdmSimulation {
  SdmData data;
  Vector true_theta;  // unconstrained packing
  std::vector<int> true_z;
};

// Sites on a grid_side x grid_side lattice with x_j = (1, N(0,1), ...).
// Parameters drawn from the priors; with `uniform_classes` beta is forced to
// zero so every p_j is uniform.
SdmSimulation sdm_simulate(const SdmConfig& config, int grid_side, std::uint64_t seed,
                           bool uniform_classes = false);

}  // namespace ripple
