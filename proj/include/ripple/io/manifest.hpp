#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ripple/engine/stage.hpp"
#include "ripple/io/config.hpp"

namespace ripple {

// Run record written next to every output: command, configuration, seeds and
// per-stage statistics. Timing fields live under "timing" so comparisons of
// two runs can drop them.
struct Manifest {
  std::string command;
  RunConfig config;
  std::vector<std::string> parameters;
  std::vector<std::pair<std::string, std::string>> inputs;   // label -> path
  std::vector<StageStats> stages;
  std::vector<std::pair<std::string, std::string>> outputs;  // label -> file name
  std::vector<std::pair<std::string, double>> values;         // scalar summaries
  double seconds = 0.0;
};

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

// Parameter names recorded in a manifest (empty when absent).
std::vector<std::string> manifest_parameters(const std::filesystem::path& path);

// Manifest text without the timing fields, for determinism checks.
std::string manifest_without_timing(const std::filesystem::path& path);

}  // namespace ripple
