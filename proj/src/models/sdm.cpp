#include "ripple/models/sdm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ripple/core/random.hpp"

namespace ripple {

TensorBasis SdmConfig::make_basis() const {
  return TensorBasis(BSplineBasis(basis_wavelength, wavelength_min, wavelength_max),
                     BSplineBasis(basis_day, day_min, day_max));
}

namespace {

Matrix gamma_prior_cov(const SdmConfig& c) {
  Matrix cov = Matrix::Constant(c.categories, c.categories, c.rho * c.tau2_gamma);
  cov.diagonal().setConstant(c.tau2_gamma);
  return cov;
}

void validate(const SdmConfig& c) {
  if (c.categories < 1) throw std::invalid_argument("sdm: K must be >= 1");
  if (c.predictors < 1) throw std::invalid_argument("sdm: P must be >= 1");
  if (!(c.tau2_beta > 0.0) || !(c.tau2_gamma > 0.0) || !(c.sigma_scale > 0.0)) {
    throw std::invalid_argument("sdm: prior scales must be positive");
  }
  if (!(std::abs(c.rho) < 1.0)) throw std::invalid_argument("sdm: |rho| must be < 1");
  Eigen::LLT<Matrix> llt(gamma_prior_cov(c));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("sdm: gamma prior covariance is not positive definite");
  }
}

// Log class probabilities from the K-1 linear predictors (baseline last).
Vector log_class_probs(const Vector& linear) {
  const Eigen::Index k1 = linear.size();
  std::vector<double> terms(static_cast<std::size_t>(k1 + 1));
  terms[0] = 0.0;
  for (Eigen::Index k = 0; k < k1; ++k) terms[static_cast<std::size_t>(k + 1)] = linear(k);
  const double norm = log_sum_exp(terms);
  Vector out(k1 + 1);
  out.head(k1) = linear.array() - norm;
  out(k1) = -norm;
  return out;
}

}  // namespace

SdmModel::SdmModel(SdmConfig config, SdmData data)
    : config_(config), data_(std::move(data)), basis_((validate(config), config.make_basis())) {
  const int k = config_.categories;
  const int p = config_.predictors;
  const int l = config_.basis_count();
  for (int kk = 0; kk < k - 1; ++kk) {
    for (int pp = 0; pp < p; ++pp) {
      names_.push_back("beta_k" + std::to_string(kk + 1) + "_p" + std::to_string(pp + 1));
    }
  }
  for (int ll = 0; ll < l; ++ll) {
    for (int kk = 0; kk < k; ++kk) {
      names_.push_back("gamma_l" + std::to_string(ll + 1) + "_k" + std::to_string(kk + 1));
    }
  }
  names_.push_back("sigma2");
  transforms_.assign(names_.size(), Transform::identity);
  transforms_.back() = Transform::log;

  gamma_prior_factor_ = cholesky_with_jitter(gamma_prior_cov(config_), "gamma prior covariance");

  site_basis_.reserve(data_.sites.size());
  site_reflectance_.reserve(data_.sites.size());
  for (std::size_t j = 0; j < data_.sites.size(); ++j) {
    const SdmSite& site = data_.sites[j];
    if (site.x.size() != p) {
      throw std::invalid_argument("sdm: site " + std::to_string(j) + " has " +
                                  std::to_string(site.x.size()) + " predictors, expected " +
                                  std::to_string(p));
    }
    const auto n = static_cast<Eigen::Index>(site.records.size());
    Matrix g(n, l);
    Vector r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const ReflectanceRecord& rec = site.records[static_cast<std::size_t>(i)];
      if (!std::isfinite(rec.r) || !std::isfinite(rec.w) || !std::isfinite(rec.d)) {
        throw std::invalid_argument("sdm: non-finite reflectance record at site " + std::to_string(j));
      }
      g.row(i) = basis_.evaluate(rec.w, rec.d).transpose();
      r(i) = rec.r;
    }
    site_basis_.push_back(std::move(g));
    site_reflectance_.push_back(std::move(r));
  }
}

Matrix SdmModel::unpack_beta(const Vector& theta) const {
  const int k1 = config_.categories - 1;
  Matrix beta(config_.predictors, k1);
  for (int k = 0; k < k1; ++k) {
    for (int p = 0; p < config_.predictors; ++p) beta(p, k) = theta(beta_index(k, p));
  }
  return beta;
}

Matrix SdmModel::unpack_gamma(const Vector& theta) const {
  Matrix gamma(config_.basis_count(), config_.categories);
  for (int l = 0; l < config_.basis_count(); ++l) {
    for (int k = 0; k < config_.categories; ++k) gamma(l, k) = theta(gamma_index(l, k));
  }
  return gamma;
}

Vector SdmModel::site_joint_log_terms(std::size_t site, const Vector& theta) const {
  if (theta.size() != dim()) throw std::invalid_argument("sdm: theta has wrong dimension");
  return site_joint_log_terms(site, unpack_beta(theta), unpack_gamma(theta), theta(sigma2_index()));
}

Vector SdmModel::site_joint_log_terms(std::size_t site, const Matrix& beta, const Matrix& gamma,
                                      double log_s2) const {
  const double s2 = std::exp(log_s2);

  Vector terms = log_class_probs(beta.transpose() * data_.sites[site].x);
  const Matrix& g = site_basis_[site];
  if (g.rows() > 0) {
    const Matrix resid = (g * gamma).colwise() - site_reflectance_[site];
    const double n = static_cast<double>(g.rows());
    const Vector sq = resid.colwise().squaredNorm().transpose();
    terms.array() += -0.5 * n * (kLogTwoPi + log_s2) - 0.5 * sq.array() / s2;
  }
  return terms;
}

double SdmModel::log_likelihood(std::span<const std::size_t> rows, const Vector& theta) const {
  return sdm_log_likelihood(*this, rows, theta);
}

double SdmModel::log_prior(const Vector& theta) const {
  const double sd_beta = std::sqrt(config_.tau2_beta);
  double acc = 0.0;
  const Eigen::Index n_beta = config_.predictors * (config_.categories - 1);
  for (Eigen::Index i = 0; i < n_beta; ++i) acc += normal_log_pdf(theta(i), 0.0, sd_beta);
  const Vector zero = Vector::Zero(config_.categories);
  for (int l = 0; l < config_.basis_count(); ++l) {
    acc += mvn_log_density(theta.segment(gamma_index(l, 0), config_.categories), zero,
                           gamma_prior_factor_);
  }
  // Half-normal on sigma, written for u = log sigma^2: sigma = exp(u / 2) and
  // |d sigma / d u| = sigma / 2.
  const double u = theta(sigma2_index());
  const double sigma = std::exp(0.5 * u);
  const double s = config_.sigma_scale;
  acc += std::log(2.0) + normal_log_pdf(sigma, 0.0, s) + 0.5 * u - std::log(2.0);
  return acc;
}

std::vector<std::vector<Eigen::Index>> SdmModel::default_blocks() const {
  std::vector<std::vector<Eigen::Index>> blocks;
  if (config_.categories > 1) blocks.push_back(beta_group());
  for (int l = 0; l < config_.basis_count(); ++l) {
    std::vector<Eigen::Index> block;
    for (int k = 0; k < config_.categories; ++k) block.push_back(gamma_index(l, k));
    blocks.push_back(std::move(block));
  }
  blocks.push_back({sigma2_index()});
  return blocks;
}

std::vector<Eigen::Index> SdmModel::beta_group() const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < config_.predictors * (config_.categories - 1); ++i) out.push_back(i);
  return out;
}

std::vector<Eigen::Index> SdmModel::gamma_group() const {
  std::vector<Eigen::Index> out;
  for (int l = 0; l < config_.basis_count(); ++l) {
    for (int k = 0; k < config_.categories; ++k) out.push_back(gamma_index(l, k));
  }
  return out;
}

Vector multinomial_probs(const Vector& eta) {
  for (Eigen::Index k = 0; k < eta.size(); ++k) {
    if (!(eta(k) > 0.0)) throw std::invalid_argument("multinomial_probs: eta must be positive");
  }
  const double denom = 1.0 + eta.sum();
  Vector p(eta.size() + 1);
  p.head(eta.size()) = eta / denom;
  p(eta.size()) = 1.0 - p.head(eta.size()).sum();
  return p;
}

double sdm_log_likelihood(const SdmModel& model, std::span<const std::size_t> rows,
                          const Vector& theta) {
  if (theta.size() != model.dim()) throw std::invalid_argument("sdm: theta has wrong dimension");
  const Matrix beta = model.unpack_beta(theta);
  const Matrix gamma = model.unpack_gamma(theta);
  const double log_s2 = theta(model.sigma2_index());
  double acc = 0.0;
  for (std::size_t j : rows) {
    if (j >= model.row_count()) throw std::invalid_argument("sdm: site index out of range");
    const Vector terms = model.site_joint_log_terms(j, beta, gamma, log_s2);
    acc += log_sum_exp(std::span<const double>(terms.data(), static_cast<std::size_t>(terms.size())));
  }
  return acc;
}

Vector sdm_predict_z(const SdmModel& model, std::size_t site, const Vector& theta) {
  const Vector terms = model.site_joint_log_terms(site, theta);
  const double norm =
      log_sum_exp(std::span<const double>(terms.data(), static_cast<std::size_t>(terms.size())));
  return (terms.array() - norm).exp();
}

SdmSimulation sdm_simulate(const SdmConfig& config, int grid_side, std::uint64_t seed,
                           bool uniform_classes) {
  if (grid_side < 2) throw std::invalid_argument("sdm_simulate: grid_side must be >= 2");
  validate(config);
  RandomStream rng(seed, {0x5D3});
  const TensorBasis basis = config.make_basis();
  const int k = config.categories;
  const int p = config.predictors;
  const int l = config.basis_count();

  SdmSimulation sim;
  sim.true_theta = Vector::Zero(config.parameter_count());
  const Eigen::Index n_beta = p * (k - 1);
  if (!uniform_classes) {
    for (Eigen::Index i = 0; i < n_beta; ++i) sim.true_theta(i) = std::sqrt(config.tau2_beta) * rng.normal();
  }
  const CholeskyFactor gf = cholesky_with_jitter(gamma_prior_cov(config), "gamma prior covariance");
  for (int ll = 0; ll < l; ++ll) {
    sim.true_theta.segment(n_beta + ll * k, k) = gf.lower * rng.standard_normal(k);
  }
  const double sigma = config.sigma_scale * std::abs(rng.normal());
  sim.true_theta(sim.true_theta.size() - 1) = 2.0 * std::log(sigma);

  Matrix beta(p, k - 1);
  for (int kk = 0; kk < k - 1; ++kk) beta.col(kk) = sim.true_theta.segment(kk * p, p);
  Matrix gamma(l, k);
  for (int ll = 0; ll < l; ++ll) gamma.row(ll) = sim.true_theta.segment(n_beta + ll * k, k).transpose();

  const int sites = grid_side * grid_side;
  sim.data.sites.reserve(static_cast<std::size_t>(sites));
  for (int j = 0; j < sites; ++j) {
    SdmSite site;
    site.x.resize(p);
    site.x(0) = 1.0;
    for (int pp = 1; pp < p; ++pp) site.x(pp) = rng.normal();
    const Vector probs = multinomial_probs((beta.transpose() * site.x).array().exp().matrix());
    const double u = rng.uniform();
    double acc = 0.0;
    int z = k - 1;
    for (int kk = 0; kk < k; ++kk) {
      acc += probs(kk);
      if (u < acc) {
        z = kk;
        break;
      }
    }
    site.z_true = z;
    sim.true_z.push_back(z);
    for (int v = 0; v < config.visits; ++v) {
      const double day = config.day_min + (config.day_max - config.day_min) * rng.uniform();
      for (int b = 0; b < config.bands; ++b) {
        const double w = config.wavelength_min +
                         (config.wavelength_max - config.wavelength_min) * (b + 0.5) / config.bands;
        const double mean = basis.evaluate(w, day).dot(gamma.col(z));
        site.records.push_back({mean + sigma * rng.normal(), w, day});
      }
    }
    sim.data.sites.push_back(std::move(site));
  }
  return sim;
}

}  // namespace ripple
