#include "ripple/smoothing/block.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ripple {

BlockStructure::BlockStructure(std::vector<IndexSet> blocks, Eigen::Index dim)
    : blocks_(std::move(blocks)), dim_(dim) {
  if (blocks_.empty()) throw std::invalid_argument("block structure needs at least one block");
  std::vector<int> seen(static_cast<std::size_t>(dim), 0);
  for (const IndexSet& block : blocks_) {
    if (block.empty()) throw std::invalid_argument("block structure contains an empty block");
    for (Eigen::Index idx : block) {
      if (idx < 0 || idx >= dim) {
        throw std::invalid_argument("block index " + std::to_string(idx) + " out of range");
      }
      if (seen[static_cast<std::size_t>(idx)]++) {
        throw std::invalid_argument("block index " + std::to_string(idx) + " appears twice");
      }
    }
  }
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    if (!seen[static_cast<std::size_t>(idx)]) {
      throw std::invalid_argument("parameter " + std::to_string(idx) + " is not in any block");
    }
  }
}

BlockStructure BlockStructure::joint(Eigen::Index dim) {
  IndexSet all(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) all[static_cast<std::size_t>(i)] = i;
  return BlockStructure({all}, dim);
}

IndexSet complement(const IndexSet& block, Eigen::Index dim) {
  std::vector<bool> in_block(static_cast<std::size_t>(dim), false);
  for (Eigen::Index idx : block) in_block[static_cast<std::size_t>(idx)] = true;
  IndexSet rest;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!in_block[static_cast<std::size_t>(i)]) rest.push_back(i);
  }
  return rest;
}

Vector gather(const Vector& theta, const IndexSet& indices) {
  Vector out(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) out(static_cast<Eigen::Index>(k)) = theta(indices[k]);
  return out;
}

void scatter(Vector& theta, const IndexSet& indices, const Vector& values) {
  for (std::size_t k = 0; k < indices.size(); ++k) theta(indices[k]) = values(static_cast<Eigen::Index>(k));
}

namespace {

Matrix sub_matrix(const Matrix& a, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(rows[i], cols[j]);
    }
  }
  return out;
}

Matrix gather_columns(const Matrix& a, const IndexSet& cols) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
  return out;
}

}  // namespace

BlockConditional::BlockConditional(const SmoothedKernel& kernel, IndexSet block)
    : kernel_(&kernel), block_(std::move(block)) {
  const Eigen::Index p = kernel.dim();
  if (block_.empty()) throw std::invalid_argument("block must be nonempty");
  for (Eigen::Index idx : block_) {
    if (idx < 0 || idx >= p) throw std::invalid_argument("block index out of range");
  }
  rest_ = complement(block_, p);
  if (static_cast<Eigen::Index>(block_.size() + rest_.size()) != p) {
    throw std::invalid_argument("block contains duplicate indices");
  }
  if (rest_.empty()) {
    uniform_weights_ = true;
    if (kernel.component_factor()) conditional_factor_ = *kernel.component_factor();
    return;
  }
  if (kernel.is_point_mass()) throw std::invalid_argument("blocking requires lambda < 1");

  const Matrix sigma = kernel.effective_component_cov();
  const Matrix s_rr = sub_matrix(sigma, rest_, rest_);
  const Matrix s_br = sub_matrix(sigma, block_, rest_);
  const Matrix s_bb = sub_matrix(sigma, block_, block_);

  rest_factor_ = cholesky_with_jitter(s_rr, "out-of-block covariance");
  // projection = s_br * s_rr^{-1}, via the factor: solve s_rr X^T = s_br^T.
  const auto lower = rest_factor_.lower.triangularView<Eigen::Lower>();
  const Matrix half = lower.solve(s_br.transpose());  // L^{-1} s_rb
  projection_ = rest_factor_.lower.transpose().triangularView<Eigen::Upper>().solve(half).transpose();
  Matrix s_cond = s_bb - half.transpose() * half;
  s_cond = 0.5 * (s_cond + s_cond.transpose());
  conditional_factor_ = cholesky_with_jitter(s_cond, "conditional block covariance");

  uniform_weights_ = kernel.lambda() == 0.0;
  if (!uniform_weights_) {
    const Matrix rest_means = gather_columns(kernel.component_means(), rest_);
    whitened_rest_means_ = lower.solve(rest_means.transpose()).transpose();
  }
}

Vector BlockConditional::log_weights(const Vector& theta_rest) const {
  const Eigen::Index m = kernel_->size();
  if (theta_rest.size() != static_cast<Eigen::Index>(rest_.size())) {
    throw std::invalid_argument("conditional weights: theta_rest has wrong dimension");
  }
  if (uniform_weights_) return Vector::Constant(m, -std::log(static_cast<double>(m)));
  const Vector v = rest_factor_.whiten(theta_rest);
  Vector logw = -0.5 * (whitened_rest_means_.rowwise() - v.transpose()).rowwise().squaredNorm();
  const double norm = log_sum_exp(std::span<const double>(logw.data(), static_cast<std::size_t>(m)));
  logw.array() -= norm;
  return logw;
}

Vector BlockConditional::conditional_mean(Eigen::Index component, const Vector& theta_rest) const {
  const Vector mu = kernel_->component_means().row(component).transpose();
  Vector out = gather(mu, block_);
  if (!rest_.empty()) out += projection_ * (theta_rest - gather(mu, rest_));
  return out;
}

Vector conditional_block_weights(const BlockConditional& conditional, const Vector& theta_rest) {
  return conditional.log_weights(theta_rest).array().exp();
}

Vector conditional_block_weights(const SmoothedKernel& kernel, const IndexSet& block,
                                 const Vector& theta_rest) {
  return conditional_block_weights(BlockConditional(kernel, block), theta_rest);
}

Vector sample_conditional_block(const BlockConditional& conditional, const Vector& theta_rest,
                                RandomStream& rng) {
  const SmoothedKernel& kernel = conditional.kernel();
  if (conditional.is_full()) return gather(sample_joint(kernel, rng), conditional.block());

  Eigen::Index component = 0;
  if (conditional.has_uniform_weights()) {
    component = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(kernel.size())));
  } else {
    const Vector w = conditional_block_weights(conditional, theta_rest);
    const double u = rng.uniform();
    double acc = 0.0;
    component = w.size() - 1;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      acc += w(i);
      if (u < acc) {
        component = i;
        break;
      }
    }
  }
  const Vector z = rng.standard_normal(static_cast<Eigen::Index>(conditional.block().size()));
  return conditional.conditional_mean(component, theta_rest) +
         conditional.conditional_factor().lower.triangularView<Eigen::Lower>() * z;
}

Vector sample_conditional_block(const SmoothedKernel& kernel, const IndexSet& block,
                                const Vector& theta_rest, RandomStream& rng) {
  return sample_conditional_block(BlockConditional(kernel, block), theta_rest, rng);
}

double conditional_log_density(const BlockConditional& conditional, const Vector& theta_block,
                               const Vector& theta_rest) {
  const SmoothedKernel& kernel = conditional.kernel();
  if (kernel.is_point_mass()) throw std::invalid_argument("density undefined for point-mass kernel");
  const Vector logw = conditional.log_weights(theta_rest);
  std::vector<double> terms(static_cast<std::size_t>(kernel.size()));
  for (Eigen::Index i = 0; i < kernel.size(); ++i) {
    terms[static_cast<std::size_t>(i)] =
        logw(i) + mvn_log_density(theta_block, conditional.conditional_mean(i, theta_rest),
                                  conditional.conditional_factor());
  }
  return log_sum_exp(terms);
}

double rest_marginal_log_density(const BlockConditional& conditional, const Vector& theta_rest) {
  const SmoothedKernel& kernel = conditional.kernel();
  if (conditional.is_full()) return 0.0;
  std::vector<double> terms(static_cast<std::size_t>(kernel.size()));
  for (Eigen::Index i = 0; i < kernel.size(); ++i) {
    const Vector mu = gather(kernel.component_means().row(i).transpose(), conditional.rest());
    terms[static_cast<std::size_t>(i)] = mvn_log_density(theta_rest, mu, conditional.rest_factor());
  }
  return log_sum_exp(terms) - std::log(static_cast<double>(kernel.size()));
}

}  // namespace ripple
