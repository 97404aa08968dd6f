#pragma once

#include <map>
#include <string>
#include <vector>

#include "ripple/smoothing/particle_set.hpp"

namespace ripple {

struct MeanKs {
  Vector per_param;  // one KS statistic per column
  double mean = 0.0;
};

// Column-wise two-sample KS statistics and their unweighted mean. The
// statistic is invariant under strictly increasing transforms, so the result
// is the same on the unconstrained and natural scales. Throws on mismatched
// parameter names.
MeanKs mean_ks(const ParticleSet& a, const ParticleSet& b);

// Same, restricted to a subset of columns.
MeanKs mean_ks(const ParticleSet& a, const ParticleSet& b, const std::vector<Eigen::Index>& columns);

// Distinct-row counts per stage, in order.
std::vector<std::size_t> depletion_trace(const std::vector<ParticleSet>& stages);

struct PairwiseKs {
  std::size_t first = 0;
  std::size_t second = 0;
  double mean_ks = 0.0;
  Vector per_param;
};

struct DiagnosticReport {
  Vector per_param_ks;
  double mean_ks = 0.0;
  std::vector<std::size_t> depletion_trace;
  Matrix pairwise;                 // R x R mean-KS, zero diagonal
  std::vector<PairwiseKs> pairs;   // every unordered pair i < j
  std::map<std::string, double> summary;  // min, q25, median, q75, max
  double threshold = 0.1;
  bool flagged = false;
  std::map<std::string, std::string> metadata;
};

// Compares the final-stage samples of runs over distinct partitions of the
// same data. Every unordered pair gets a mean-KS value; the report is flagged
// when any value exceeds `threshold`, meaning at least one run does not
// represent the common target. Needs at least two runs of equal dimension.
DiagnosticReport multi_partition_diagnostic(const std::vector<ParticleSet>& runs,
                                            double threshold = 0.1);

}  // namespace ripple
