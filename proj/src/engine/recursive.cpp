#include "ripple/engine/recursive.hpp"

#include <chrono>
#include <stdexcept>

namespace ripple {

RecursiveRun run_recursive(const ModelSpec& model, const DataPartition& partition,
                           const StageConfig& cfg, const ParticleSet& stage1,
                           const StageObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  if (partition.row_count() != model.row_count()) {
    throw std::invalid_argument("partition covers " + std::to_string(partition.row_count()) +
                                " rows but the model has " + std::to_string(model.row_count()));
  }
  if (partition.batch_count() == 0) throw std::invalid_argument("partition has no batches");
  if (stage1.dim() != model.dim()) throw std::invalid_argument("stage-1 particles have wrong dimension");
  cfg.validate(model.dim());

  RecursiveRun run;
  run.stages.push_back(stage1.with_stage(1));
  for (std::size_t j = 1; j < partition.batch_count(); ++j) {
    StageResult result = run_stage(model, partition.batch(j), run.stages.back(), cfg);
    if (observer) observer(result.particles, result.stats);
    run.stages.push_back(std::move(result.particles));
    run.stats.push_back(result.stats);
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace ripple
