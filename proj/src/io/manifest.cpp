#include "ripple/io/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "ripple/core/error.hpp"

namespace ripple {

namespace {

constexpr int kFormatVersion = 1;

}  // namespace

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["command"] = manifest.command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.config.entries) config[key] = value;
  j["config"] = config;
  j["parameters"] = manifest.parameters;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [label, file] : manifest.inputs) inputs[label] = file;
  j["inputs"] = inputs;
  j["seeds"] = {{"data", manifest.config.data.seed},
                {"partition", manifest.config.partition.seed},
                {"sampler", manifest.config.sampler.seed},
                {"stage1", manifest.config.stage1.seed},
                {"reference", manifest.config.reference.seed}};
  j["sampler"] = {{"lambda", manifest.config.sampler.lambda},
                  {"particles", manifest.config.sampler.particles},
                  {"chains", manifest.config.sampler.chains},
                  {"warmup", manifest.config.sampler.warmup},
                  {"blocks", manifest.config.sampler.blocks},
                  {"kernel", manifest.config.sampler.kernel}};
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  nlohmann::ordered_json timing_stages = nlohmann::ordered_json::array();
  for (const auto& s : manifest.stages) {
    stages.push_back({{"stage", s.stage},
                      {"batch_size", s.batch_size},
                      {"acceptance_rate", s.acceptance_rate},
                      {"block_acceptance", s.block_acceptance},
                      {"unique_count", s.unique_count},
                      {"proposals", s.proposals},
                      {"unique_proposals", s.unique_proposals},
                      {"kernel_jitter", s.kernel_jitter}});
    timing_stages.push_back(s.seconds);
  }
  j["stages"] = stages;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  for (const auto& [label, file] : manifest.outputs) outputs[label] = file;
  j["outputs"] = outputs;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const auto& [label, v] : manifest.values) values[label] = v;
  j["values"] = values;
  j["timing"] = {{"total_seconds", manifest.seconds}, {"stage_seconds", timing_stages}};

  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

std::vector<std::string> manifest_parameters(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read manifest '" + path.string() + "'");
  const nlohmann::json j = nlohmann::json::parse(in);
  if (!j.contains("parameters")) return {};
  return j.at("parameters").get<std::vector<std::string>>();
}

std::string manifest_without_timing(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read manifest '" + path.string() + "'");
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
  j.erase("timing");
  return j.dump();
}

}  // namespace ripple
