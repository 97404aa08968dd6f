#pragma once

#include <vector>

#include "ripple/smoothing/kernel.hpp"

namespace ripple {

using IndexSet = std::vector<Eigen::Index>;

// An ordered partition of {0, ..., P-1} into nonempty disjoint blocks.
class BlockStructure {
 public:
  BlockStructure() = default;
  // Throws std::invalid_argument unless the blocks partition {0, ..., dim-1}.
  BlockStructure(std::vector<IndexSet> blocks, Eigen::Index dim);

  // One block holding every parameter.
  static BlockStructure joint(Eigen::Index dim);

  const std::vector<IndexSet>& blocks() const { return blocks_; }
  std::size_t count() const { return blocks_.size(); }
  Eigen::Index dim() const { return dim_; }
  bool is_joint() const { return blocks_.size() == 1; }

 private:
  std::vector<IndexSet> blocks_;
  Eigen::Index dim_ = 0;
};

// Sorted complement of `block` in {0, ..., dim-1}.
IndexSet complement(const IndexSet& block, Eigen::Index dim);

Vector gather(const Vector& theta, const IndexSet& indices);
void scatter(Vector& theta, const IndexSet& indices, const Vector& values);

// The conditional of a SmoothedKernel for one block b given the rest (-b):
//
//   q(theta_b | theta_-b) = sum_i w_i N(theta_b | mu^i_{b|-b}, Sigma_{b|-b}),
//   w_i ∝ N(theta_-b | mu^i_-b, Sigma_{-b,-b}),
//   mu^i_{b|-b} = mu^i_b + Sigma_{b,-b} Sigma_{-b,-b}^{-1} (theta_-b - mu^i_-b),
//   Sigma_{b|-b} = Sigma_{b,b} - Sigma_{b,-b} Sigma_{-b,-b}^{-1} Sigma_{-b,b}.
//
// Construction factorizes Sigma_{-b,-b} and Sigma_{b|-b} once and whitens the
// complement means, so each weight evaluation afterwards is O(M |-b|). Holds
// a reference to the kernel, which must outlive it.
//
// A block covering every parameter has an empty complement; the conditional
// is then the joint kernel itself and lambda = 1 is permitted.
class BlockConditional {
 public:
  // Throws std::invalid_argument("blocking requires lambda < 1") when the
  // complement is nonempty and the kernel is a point mass.
  BlockConditional(const SmoothedKernel& kernel, IndexSet block);

  const SmoothedKernel& kernel() const { return *kernel_; }
  const IndexSet& block() const { return block_; }
  const IndexSet& rest() const { return rest_; }
  bool is_full() const { return rest_.empty(); }
  // True when all weights are 1/M regardless of theta_-b.
  bool has_uniform_weights() const { return uniform_weights_; }

  // Sigma_{b,-b} Sigma_{-b,-b}^{-1}.
  const Matrix& projection() const { return projection_; }
  const CholeskyFactor& rest_factor() const { return rest_factor_; }
  const CholeskyFactor& conditional_factor() const { return conditional_factor_; }

  Vector log_weights(const Vector& theta_rest) const;
  Vector conditional_mean(Eigen::Index component, const Vector& theta_rest) const;

 private:
  const SmoothedKernel* kernel_;
  IndexSet block_;
  IndexSet rest_;
  bool uniform_weights_ = true;
  Matrix projection_;
  CholeskyFactor rest_factor_;
  CholeskyFactor conditional_factor_;
  RowMatrix whitened_rest_means_;
};

// Normalized mixture weights w_i (nonnegative, summing to one).
Vector conditional_block_weights(const BlockConditional& conditional, const Vector& theta_rest);
Vector conditional_block_weights(const SmoothedKernel& kernel, const IndexSet& block,
                                 const Vector& theta_rest);

// Selects a component with probability w_i, then draws from its conditional
// Gaussian. Returns a vector over the block's indices (in block order).
Vector sample_conditional_block(const BlockConditional& conditional, const Vector& theta_rest,
                                RandomStream& rng);
Vector sample_conditional_block(const SmoothedKernel& kernel, const IndexSet& block,
                                const Vector& theta_rest, RandomStream& rng);

// log q(theta_b | theta_-b) and log q(theta_-b), the two factors of the joint
// kernel density for this block split.
double conditional_log_density(const BlockConditional& conditional, const Vector& theta_block,
                               const Vector& theta_rest);
double rest_marginal_log_density(const BlockConditional& conditional, const Vector& theta_rest);

}  // namespace ripple
