#include "ripple/diagnostics/report.hpp"

#include <algorithm>
#include <stdexcept>

#include "ripple/diagnostics/ks.hpp"
#include "ripple/smoothing/marginal_kde.hpp"

namespace ripple {

MeanKs mean_ks(const ParticleSet& a, const ParticleSet& b, const std::vector<Eigen::Index>& columns) {
  if (a.dim() != b.dim()) throw std::invalid_argument("mean_ks: particle sets differ in dimension");
  if (a.param_names() != b.param_names()) throw std::invalid_argument("mean_ks: parameter names differ");
  if (columns.empty()) throw std::invalid_argument("mean_ks: no columns selected");
  MeanKs out;
  out.per_param.resize(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const Eigen::Index p = columns[k];
    if (p < 0 || p >= a.dim()) throw std::invalid_argument("mean_ks: column out of range");
    const Vector x = a.values().col(p);
    const Vector y = b.values().col(p);
    out.per_param(static_cast<Eigen::Index>(k)) =
        ks_two_sample(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                      std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
  }
  out.mean = out.per_param.mean();
  return out;
}

MeanKs mean_ks(const ParticleSet& a, const ParticleSet& b) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(a.dim()));
  for (Eigen::Index p = 0; p < a.dim(); ++p) all[static_cast<std::size_t>(p)] = p;
  return mean_ks(a, b, all);
}

std::vector<std::size_t> depletion_trace(const std::vector<ParticleSet>& stages) {
  std::vector<std::size_t> out;
  out.reserve(stages.size());
  for (const ParticleSet& s : stages) out.push_back(s.unique_count());
  return out;
}

DiagnosticReport multi_partition_diagnostic(const std::vector<ParticleSet>& runs, double threshold) {
  if (runs.size() < 2) throw std::invalid_argument("multi-partition diagnostic needs at least two runs");
  for (const ParticleSet& r : runs) {
    if (r.dim() != runs.front().dim()) throw std::invalid_argument("multi-partition diagnostic: dimension mismatch");
  }
  DiagnosticReport report;
  report.threshold = threshold;
  const auto n = static_cast<Eigen::Index>(runs.size());
  report.pairwise = Matrix::Zero(n, n);
  Vector values(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      const MeanKs m = mean_ks(runs[i], runs[j]);
      report.pairwise(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m.mean;
      report.pairwise(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = m.mean;
      report.pairs.push_back({i, j, m.mean, m.per_param});
      values(k++) = m.mean;
    }
  }
  report.summary["min"] = values.minCoeff();
  report.summary["q25"] = quantile(values, 0.25);
  report.summary["median"] = quantile(values, 0.5);
  report.summary["q75"] = quantile(values, 0.75);
  report.summary["max"] = values.maxCoeff();
  report.mean_ks = values.mean();
  report.flagged = values.maxCoeff() > threshold;
  report.depletion_trace = depletion_trace(runs);
  report.metadata["runs"] = std::to_string(runs.size());
  report.metadata["scale"] = "natural (KS is invariant under the monotone transforms)";
  return report;
}

}  // namespace ripple
