#pragma once

#include <functional>
#include <vector>

#include "ripple/engine/partition.hpp"
#include "ripple/engine/stage.hpp"

namespace ripple {

struct RecursiveRun {
  std::vector<ParticleSet> stages;  // stages[0] is the stage-1 input
  std::vector<StageStats> stats;    // one per updating stage (2..J)
  double seconds = 0.0;
};

// Called after each completed stage so callers can persist it before the next
// stage starts.
using StageObserver = std::function<void(const ParticleSet&, const StageStats&)>;

// For j = 2..J, builds the kernel from stage j-1 and runs the configured stage
// update on batch j. Stage failures propagate; stages already handed to the
// observer stay persisted.
RecursiveRun run_recursive(const ModelSpec& model, const DataPartition& partition,
                           const StageConfig& cfg, const ParticleSet& stage1,
                           const StageObserver& observer = {});

}  // namespace ripple
