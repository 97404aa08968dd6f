#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace ripple {

// SplitMix64 finalizer; used to derive independent seeds from structured keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a root seed and a path of integer keys, e.g.
// derive_seed(seed, {stage, chain}). Distinct paths give unrelated streams.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// An explicit random stream. All sampling in ripple takes one of these by
// reference; there is no global generator.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  RandomStream(std::uint64_t root, std::initializer_list<std::uint64_t> path)
      : RandomStream(derive_seed(root, path)) {}

  // Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double normal() { return normal_(engine_); }

  // Uniform on {0, ..., n-1}.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  Eigen::VectorXd standard_normal(Eigen::Index n) {
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
    return z;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ripple
