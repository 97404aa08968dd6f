#include "ripple/smoothing/particle_set.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace ripple {

ParticleSet::ParticleSet(Matrix values, std::vector<std::string> param_names, int stage)
    : values_(std::move(values)), param_names_(std::move(param_names)), stage_(stage) {
  if (values_.rows() < 2) throw std::invalid_argument("insufficient particles: need M >= 2");
  if (values_.cols() < 1) throw std::invalid_argument("particle set needs P >= 1");
  if (static_cast<Eigen::Index>(param_names_.size()) != values_.cols()) {
    throw std::invalid_argument("particle set: " + std::to_string(param_names_.size()) +
                                " names for " + std::to_string(values_.cols()) + " columns");
  }
  if (!values_.allFinite()) throw std::invalid_argument("particle set contains non-finite values");
  if (stage_ < 1) throw std::invalid_argument("particle set stage must be >= 1");
  unique_count_ = count_unique_rows(values_);
}

ParticleSet ParticleSet::with_stage(int stage) const {
  ParticleSet copy = *this;
  if (stage < 1) throw std::invalid_argument("particle set stage must be >= 1");
  copy.stage_ = stage;
  return copy;
}

std::size_t count_unique_rows(const Matrix& values) {
  const Eigen::Index m = values.rows();
  const Eigen::Index p = values.cols();
  if (m == 0) return 0;
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(m * p));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      bits[static_cast<std::size_t>(i * p + j)] = std::bit_cast<std::uint64_t>(values(i, j));
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto row_begin = [&](Eigen::Index i) { return bits.begin() + i * p; };
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::lexicographical_compare(row_begin(a), row_begin(a) + p, row_begin(b),
                                        row_begin(b) + p);
  });
  std::size_t unique = 1;
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!std::equal(row_begin(order[k]), row_begin(order[k]) + p, row_begin(order[k - 1]))) {
      ++unique;
    }
  }
  return unique;
}

std::vector<std::string> default_param_names(Eigen::Index p) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) names.push_back("theta" + std::to_string(j + 1));
  return names;
}

}  // namespace ripple
