#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "ripple/baseline/rwm.hpp"
#include "ripple/engine/partition.hpp"
#include "ripple/engine/stage.hpp"
#include "ripple/models/sdm.hpp"

namespace ripple {

// Sectioned key = value configuration. Every recognized key is listed in the
// README; unknown keys are rejected so typos do not silently fall back to
// defaults.
struct RunConfig {
  struct Model {
    std::string kind = "logistic";  // logistic | sdm | conjugate
    Eigen::Index predictors = 6;    // logistic P
    double sigma_beta2 = 1.0;
    Eigen::Index dim = 2;  // conjugate P
    double prior_var = 1.0;
    double noise_var = 1.0;
    SdmConfig sdm;
  } model;

  struct Data {
    std::string path;  // logistic / conjugate table
    std::string sites;
    std::string reflectances;
    std::string truth;  // optional truth file (natural scale)
    std::size_t simulate_n = 380;
    int grid_side = 24;
    std::uint64_t seed = 1;
  } data;

  struct Partition {
    std::string sizes = "equal";  // "equal" or a list such as "50,30x11"
    std::size_t batches = 12;     // J when sizes = equal
    std::uint64_t seed = 1;
    std::size_t design = 0;  // which design of the family (seeded from seed)
  } partition;

  struct Sampler {
    double lambda = 0.0;
    Eigen::Index particles = 10000;
    std::size_t chains = 4;
    std::size_t warmup = 500;
    std::string blocks = "joint";
    std::string kernel = "smoothed";
    std::uint64_t seed = 1;
  } sampler;

  struct Mcmc {
    std::size_t iterations = 30000;
    std::size_t warmup = 5000;
    std::size_t adapt_window = 200;
    double target_accept = 0.0;  // 0 = per-block default
    double init_scale = 0.1;
    std::size_t chains = 4;
    std::string blocks = "joint";
    std::string init = "default";  // default | truth
    std::uint64_t seed = 1;
  };
  Mcmc stage1;
  Mcmc reference;

  struct Output {
    std::string directory = "out";
    bool binary = false;
  } output;

  // Every key as read, "section.key" -> value, echoed into manifests.
  std::map<std::string, std::string> entries;
  std::filesystem::path base_dir;  // relative data paths resolve against this
};

// Reads an INI-style file, or the "config" object of a run manifest (JSON).
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::map<std::string, std::string>& entries,
                       const std::filesystem::path& base_dir = {});

// Sets `section.key` (as given on the command line) and re-parses.
void override_config(RunConfig& cfg, const std::string& key, const std::string& value);

// Model with its observation table, loaded from the data block.
std::unique_ptr<ModelSpec> load_model(const RunConfig& cfg);

DataPartition partition_from_config(const RunConfig& cfg, std::size_t n);

// "joint", "sdm" (beta / gamma per basis / sigma^2), "singletons", or an
// explicit list like "0,1,2;3;4,5".
BlockStructure blocks_from_spec(const std::string& spec, const ModelSpec& model);

StageConfig stage_config(const RunConfig& cfg, const ModelSpec& model);
RwmConfig rwm_config(const RunConfig::Mcmc& mcmc, const RunConfig& cfg, const ModelSpec& model,
                     Eigen::Index draws);

}  // namespace ripple
