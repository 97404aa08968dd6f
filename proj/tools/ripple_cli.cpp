// Command-line front end: simulate data, fit stage 1, run the recursion, fit
// all-at-once references, and compare runs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ripple/baseline/rwm.hpp"
#include "ripple/core/error.hpp"
#include "ripple/diagnostics/depletion.hpp"
#include "ripple/diagnostics/report.hpp"
#include "ripple/engine/recursive.hpp"
#include "ripple/io/config.hpp"
#include "ripple/io/csv.hpp"
#include "ripple/io/manifest.hpp"
#include "ripple/io/particles.hpp"
#include "ripple/io/tables.hpp"
#include "ripple/models/conjugate.hpp"
#include "ripple/models/logistic.hpp"
#include "ripple/models/sdm.hpp"

namespace fs = std::filesystem;
using namespace ripple;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string stage_file(int stage, bool binary) {
  char name[48];
  std::snprintf(name, sizeof name, "stage_%02d.%s", stage, binary ? "bin" : "csv");
  return name;
}

std::string reference_file(std::size_t stage) {
  char name[64];
  std::snprintf(name, sizeof name, "reference_stage_%02zu.csv", stage);
  return name;
}

RunConfig config_or_default(const std::string& path) {
  return path.empty() ? parse_config({}) : load_config(path);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  const auto start = Clock::now();
  RunConfig cfg = config_or_default(args.config);
  if (!args.model.empty()) override_config(cfg, "model.kind", args.model);
  if (args.seed) override_config(cfg, "data.seed", std::to_string(*args.seed));
  fs::create_directories(args.out);
  const fs::path out(args.out);

  Manifest manifest;
  manifest.command = "simulate";
  const auto& m = cfg.model;
  if (m.kind == "logistic") {
    const auto sim = logistic_simulate(m.predictors, m.sigma_beta2, cfg.data.simulate_n, cfg.data.seed);
    write_logistic_table(sim.data, out / "data.csv");
    const LogisticModel model(m.predictors, m.sigma_beta2, sim.data);
    write_truth(model.param_names(), sim.true_beta, out / "truth.csv");
    manifest.parameters = model.param_names();
    manifest.outputs = {{"data", "data.csv"}, {"truth", "truth.csv"}};
  } else if (m.kind == "conjugate") {
    const Vector mean = Vector::Zero(m.dim);
    const Matrix cov = Matrix::Identity(m.dim, m.dim) * m.prior_var;
    const auto sim = conjugate_simulate(mean, cov, m.noise_var, cfg.data.simulate_n, cfg.data.seed);
    write_conjugate_table(sim.observations, out / "data.csv");
    const ConjugateGaussianModel model(mean, cov, m.noise_var, sim.observations);
    write_truth(model.param_names(), sim.true_theta, out / "truth.csv");
    manifest.parameters = model.param_names();
    manifest.outputs = {{"data", "data.csv"}, {"truth", "truth.csv"}};
  } else {
    const auto sim = sdm_simulate(m.sdm, cfg.data.grid_side, cfg.data.seed);
    write_sdm_tables(sim.data, out / "sites.csv", out / "reflectances.csv");
    const SdmModel model(m.sdm, sim.data);
    Vector natural(sim.true_theta.size());
    for (Eigen::Index i = 0; i < natural.size(); ++i) {
      natural(i) = to_constrained(model.transforms()[static_cast<std::size_t>(i)], sim.true_theta(i));
    }
    write_truth(model.param_names(), natural, out / "truth.csv");
    manifest.parameters = model.param_names();
    manifest.outputs = {{"sites", "sites.csv"}, {"reflectances", "reflectances.csv"}, {"truth", "truth.csv"}};
  }
  manifest.config = cfg;
  manifest.seconds = seconds_since(start);
  write_manifest(manifest, out / "manifest.json");
  std::cout << "simulated " << m.kind << " data in " << out.string() << '\n';
  return 0;
}

// -------------------------------------------------------------- fit-stage1

struct FitArgs {
  std::string config;
  std::string stage1;
  std::optional<double> lambda;
  std::vector<std::size_t> upto;
  std::string out;
};

RwmResult fit_stage1(const RunConfig& cfg, const ModelSpec& model, const DataPartition& partition) {
  const RwmConfig rc = rwm_config(cfg.stage1, cfg, model, cfg.sampler.particles);
  return adaptive_rwm(model, partition.batch(0), rc);
}

void report_rwm(const RwmResult& fit, Manifest& manifest) {
  manifest.values.emplace_back("max_rhat", fit.max_rhat());
  for (std::size_t b = 0; b < fit.acceptance.size(); ++b) {
    manifest.values.emplace_back("acceptance_block_" + std::to_string(b), fit.acceptance[b]);
  }
}

int run_fit_stage1(const FitArgs& args) {
  const auto start = Clock::now();
  RunConfig cfg = load_config(args.config);
  const auto model = load_model(cfg);
  const auto partition = partition_from_config(cfg, model->row_count());
  const auto fit = fit_stage1(cfg, *model, partition);

  fs::create_directories(args.out);
  const fs::path out(args.out);
  const std::string file = stage_file(1, cfg.output.binary);
  write_particles(fit.particles, model->transforms(), out / file);

  Manifest manifest;
  manifest.command = "fit-stage1";
  manifest.config = cfg;
  manifest.parameters = model->param_names();
  manifest.outputs = {{"stage_1", file}};
  report_rwm(fit, manifest);
  manifest.seconds = seconds_since(start);
  write_manifest(manifest, out / "manifest.json");
  std::cout << "stage 1: " << fit.particles.size() << " draws, max R-hat " << fit.max_rhat() << '\n';
  return 0;
}

// ----------------------------------------------------------- fit-recursive

int run_fit_recursive(const FitArgs& args) {
  const auto start = Clock::now();
  RunConfig cfg = load_config(args.config);
  if (args.lambda) override_config(cfg, "sampler.lambda", format_double(*args.lambda));
  const auto model = load_model(cfg);
  const auto partition = partition_from_config(cfg, model->row_count());
  const StageConfig sc = stage_config(cfg, *model);

  fs::create_directories(args.out);
  const fs::path out(args.out);
  Manifest manifest;
  manifest.command = "fit-recursive";
  manifest.config = cfg;
  manifest.parameters = model->param_names();

  std::optional<ParticleSet> stage1;
  if (!args.stage1.empty()) {
    if (!fs::exists(args.stage1)) throw std::invalid_argument("stage-1 file '" + args.stage1 + "' does not exist");
    stage1 = read_particles(args.stage1, model->transforms(), model->param_names(), 1);
    manifest.inputs.emplace_back("stage1", fs::absolute(args.stage1).lexically_normal().string());
  } else {
    const auto fit = fit_stage1(cfg, *model, partition);
    report_rwm(fit, manifest);
    stage1 = fit.particles;
  }
  if (stage1->dim() != model->dim()) throw std::invalid_argument("stage-1 particles do not match the model dimension");

  const bool binary = cfg.output.binary;
  write_particles(*stage1, model->transforms(), out / stage_file(1, binary));
  manifest.outputs.emplace_back("stage_1", stage_file(1, binary));

  int status = 0;
  try {
    run_recursive(*model, partition, sc, *stage1, [&](const ParticleSet& set, const StageStats& stats) {
      const std::string file = stage_file(stats.stage, binary);
      write_particles(set, model->transforms(), out / file);
      manifest.outputs.emplace_back("stage_" + std::to_string(stats.stage), file);
      manifest.stages.push_back(stats);
      std::cout << "stage " << stats.stage << ": acceptance " << stats.acceptance_rate << ", unique "
                << stats.unique_count << '\n';
    });
  } catch (const std::exception& e) {
    std::cerr << "error: stage " << manifest.stages.size() + 2 << " failed: " << e.what() << '\n';
    manifest.values.emplace_back("failed_stage", static_cast<double>(manifest.stages.size() + 2));
    status = 3;
  }
  manifest.seconds = seconds_since(start);
  write_manifest(manifest, out / "manifest.json");
  return status;
}

// ----------------------------------------------------------- fit-reference

int run_fit_reference(const FitArgs& args) {
  const auto start = Clock::now();
  RunConfig cfg = load_config(args.config);
  const auto model = load_model(cfg);
  const auto partition = partition_from_config(cfg, model->row_count());
  std::vector<std::size_t> stages = args.upto;
  if (stages.empty()) stages.push_back(partition.batch_count());

  fs::create_directories(args.out);
  const fs::path out(args.out);
  Manifest manifest;
  manifest.command = "fit-reference";
  manifest.config = cfg;
  manifest.parameters = model->param_names();
  for (const std::size_t j : stages) {
    if (j < 1 || j > partition.batch_count()) {
      throw std::invalid_argument("--upto-stage must lie in 1.." + std::to_string(partition.batch_count()));
    }
    RwmConfig rc = rwm_config(cfg.reference, cfg, *model, cfg.sampler.particles);
    rc.stage = static_cast<int>(j);
    const auto rows = partition.rows_through(j);
    const auto fit = reference_fit(*model, rows, rc);
    const std::string file = reference_file(j);
    write_particles_csv(fit.particles, model->transforms(), out / file);
    manifest.outputs.emplace_back("reference_stage_" + std::to_string(j), file);
    manifest.values.emplace_back("max_rhat_stage_" + std::to_string(j), fit.max_rhat());
    std::cout << "reference through stage " << j << ": max R-hat " << fit.max_rhat() << '\n';
  }
  manifest.seconds = seconds_since(start);
  write_manifest(manifest, out / "manifest.json");
  return 0;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  std::vector<std::string> runs;
  std::string reference;
  double threshold = 0.1;
  std::string out;
};

// Particle files of a directory keyed by stage number. CSV files hold the
// natural scale and binary files the unconstrained scale; KS statistics do
// not depend on which, so no model is needed here.
std::map<std::size_t, ParticleSet> load_stage_files(const fs::path& dir, const std::regex& pattern) {
  if (!fs::is_directory(dir)) throw std::invalid_argument("run directory '" + dir.string() + "' does not exist");
  std::vector<std::string> names;
  if (fs::exists(dir / "manifest.json")) names = manifest_parameters(dir / "manifest.json");
  std::map<std::size_t, ParticleSet> sets;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch match;
    const std::string file = entry.path().filename().string();
    if (!std::regex_match(file, match, pattern)) continue;
    const auto stage = static_cast<std::size_t>(std::stoul(match[1].str()));
    if (match[2].str() == "bin") {
      sets.emplace(stage, read_particles_binary(entry.path(), names, static_cast<int>(stage)));
    } else {
      const CsvTable table = read_csv(entry.path());
      sets.emplace(stage, ParticleSet(table.values, table.header, static_cast<int>(stage)));
    }
  }
  if (sets.empty()) throw std::invalid_argument("no particle files found in '" + dir.string() + "'");
  return sets;
}

int run_diagnose(const DiagnoseArgs& args) {
  const auto start = Clock::now();
  const std::regex stage_pattern(R"(stage_(\d+)\.(csv|bin))");
  const std::regex reference_pattern(R"(reference_stage_(\d+)\.(csv))");
  std::vector<std::map<std::size_t, ParticleSet>> runs;
  for (const auto& dir : args.runs) runs.push_back(load_stage_files(dir, stage_pattern));

  fs::create_directories(args.out);
  const fs::path out(args.out);
  std::ostringstream summary;
  Manifest manifest;
  manifest.command = "diagnose";
  manifest.config = parse_config({});
  for (const auto& dir : args.runs) manifest.inputs.emplace_back("run", fs::absolute(dir).lexically_normal().string());

  // Unique-count traces.
  {
    std::vector<std::string> header{"run", "stage", "unique_count"};
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (const auto& [stage, set] : runs[r]) {
        rows.push_back({double(r), double(stage), double(set.unique_count())});
      }
    }
    Matrix values(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int c = 0; c < 3; ++c) values(static_cast<Eigen::Index>(i), c) = rows[i][static_cast<std::size_t>(c)];
    }
    write_csv(out / "depletion.csv", header, values);
    manifest.outputs.emplace_back("depletion", "depletion.csv");
  }

  if (!args.reference.empty()) {
    manifest.inputs.emplace_back("reference", fs::absolute(args.reference).lexically_normal().string());
    const auto refs = load_stage_files(args.reference, reference_pattern);
    const auto& names = refs.begin()->second.param_names();
    std::vector<std::string> header{"run", "stage", "mean_ks"};
    header.insert(header.end(), names.begin(), names.end());
    std::vector<Vector> rows;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (const auto& [stage, ref] : refs) {
        const auto it = runs[r].find(stage);
        if (it == runs[r].end()) continue;
        const MeanKs ks = mean_ks(it->second, ref);
        Vector row(3 + ks.per_param.size());
        row << double(r), double(stage), ks.mean, ks.per_param;
        rows.push_back(row);
        summary << "run " << r << " stage " << stage << ": mean KS vs reference " << ks.mean << '\n';
      }
    }
    if (rows.empty()) throw std::invalid_argument("reference stages do not match any run stage");
    Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) values.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    write_csv(out / "mean_ks_by_stage.csv", header, values);
    manifest.outputs.emplace_back("mean_ks_by_stage", "mean_ks_by_stage.csv");
  }

  if (runs.size() >= 2) {
    std::vector<ParticleSet> finals;
    for (const auto& run : runs) finals.push_back(run.rbegin()->second);
    const DiagnosticReport report = multi_partition_diagnostic(finals, args.threshold);
    Matrix values(static_cast<Eigen::Index>(report.pairs.size()), 3);
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
      const auto& p = report.pairs[i];
      values.row(static_cast<Eigen::Index>(i)) << double(p.first), double(p.second), p.mean_ks;
    }
    write_csv(out / "pairwise_ks.csv", {"first", "second", "mean_ks"}, values);
    manifest.outputs.emplace_back("pairwise", "pairwise_ks.csv");
    summary << report.pairs.size() << " pairs of final-stage samples\n";
    for (const auto& [key, v] : report.summary) {
      summary << "  " << key << " mean KS: " << v << '\n';
      manifest.values.emplace_back("pairwise_" + key, v);
    }
    summary << "threshold " << report.threshold << ": "
            << (report.flagged ? "FLAGGED, at least one run disagrees" : "all runs agree") << '\n';
    manifest.values.emplace_back("flagged", report.flagged ? 1.0 : 0.0);
  }

  write_text(out / "summary.txt", summary.str());
  manifest.outputs.emplace_back("summary", "summary.txt");
  manifest.seconds = seconds_since(start);
  write_manifest(manifest, out / "manifest.json");
  std::cout << summary.str();
  return 0;
}

// ---------------------------------------------------------- depletion-demo

struct DemoArgs {
  int rounds = 4;
  std::uint64_t seed = 1;
  Eigen::Index particles = 100;
  std::string out;
};

int run_depletion_demo(const DemoArgs& args) {
  const auto start = Clock::now();
  if (args.rounds < 0) throw std::invalid_argument("--rounds must be non-negative");
  const DepletionDemo demo = depletion_demo(args.particles, args.rounds, args.seed);
  fs::create_directories(args.out);
  const fs::path out(args.out);

  Matrix trace(static_cast<Eigen::Index>(demo.trace.size()), 2);
  for (std::size_t i = 0; i < demo.trace.size(); ++i) {
    trace.row(static_cast<Eigen::Index>(i)) << double(i), double(demo.trace[i]);
  }
  write_csv(out / "trace.csv", {"round", "unique_count"}, trace);
  const std::vector<std::string> names{"theta1", "theta2"};
  write_csv(out / "original.csv", names, demo.original.values());
  write_csv(out / "resampled.csv", names, demo.final.values());

  Manifest manifest;
  manifest.command = "depletion-demo";
  manifest.config = parse_config({});
  manifest.parameters = names;
  manifest.outputs = {{"trace", "trace.csv"}, {"original", "original.csv"}, {"resampled", "resampled.csv"}};
  for (const auto& r : demo.refreshed) {
    const std::string file = "refreshed_" + std::regex_replace(r.label, std::regex("="), "_") + ".csv";
    write_csv(out / file, names, r.values);
    manifest.outputs.emplace_back(r.label, file);
  }
  manifest.values = {{"rounds", double(args.rounds)},
                     {"seed", double(args.seed)},
                     {"particles", double(args.particles)},
                     {"final_unique", double(demo.trace.back())},
                     {"expected_unique_one_round", expected_unique_after_resample(args.particles)}};
  manifest.seconds = seconds_since(start);
  write_manifest(manifest, out / "manifest.json");
  std::cout << "unique counts:";
  for (const auto u : demo.trace) std::cout << ' ' << u;
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive Bayesian inference with smoothed prior-proposal updates"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a data set and its truth file");
  simulate->add_option("--model", sim.model, "logistic, sdm or conjugate")
      ->check(CLI::IsMember({"logistic", "sdm", "conjugate"}));
  simulate->add_option("--config", sim.config, "Configuration file")->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.seed, "Simulation seed");
  simulate->add_option("--out", sim.out, "Output directory")->required();

  FitArgs stage1_args;
  auto* stage1 = app.add_subcommand("fit-stage1", "Adaptive random-walk Metropolis on the first batch");
  stage1->add_option("--config", stage1_args.config, "Configuration file")->required()->check(CLI::ExistingFile);
  stage1->add_option("--out", stage1_args.out, "Output directory")->required();

  FitArgs rec_args;
  auto* recursive = app.add_subcommand("fit-recursive", "Run the recursive stages 2..J");
  recursive->add_option("--config", rec_args.config, "Configuration file")->required()->check(CLI::ExistingFile);
  recursive->add_option("--stage1", rec_args.stage1, "Stage-1 particle file (fitted if omitted)")
      ->check(CLI::ExistingFile);
  recursive->add_option("--lambda", rec_args.lambda, "Override sampler.lambda")->check(CLI::Range(0.0, 1.0));
  recursive->add_option("--out", rec_args.out, "Output directory")->required();

  FitArgs ref_args;
  auto* reference = app.add_subcommand("fit-reference", "All-at-once fit on the first j batches");
  reference->add_option("--config", ref_args.config, "Configuration file")->required()->check(CLI::ExistingFile);
  reference->add_option("--upto-stage", ref_args.upto, "Stages to fit (repeatable; default J)");
  reference->add_option("--out", ref_args.out, "Output directory")->required();

  DiagnoseArgs diag;
  auto* diagnose = app.add_subcommand("diagnose", "KS comparisons and multi-partition agreement");
  diagnose->add_option("--runs", diag.runs, "Run directories")->required()->check(CLI::ExistingDirectory);
  diagnose->add_option("--reference", diag.reference, "Reference directory")->check(CLI::ExistingDirectory);
  diagnose->add_option("--threshold", diag.threshold, "Pairwise mean-KS flag threshold")
      ->check(CLI::Range(0.0, 1.0));
  diagnose->add_option("--out", diag.out, "Output directory")->required();

  DemoArgs demo;
  auto* depletion = app.add_subcommand("depletion-demo", "Particle depletion under repeated resampling");
  depletion->add_option("--rounds", demo.rounds, "Resampling rounds")->check(CLI::NonNegativeNumber);
  depletion->add_option("--seed", demo.seed, "Seed");
  depletion->add_option("--particles", demo.particles, "Particle count")->check(CLI::Range(2, 1000000000));
  depletion->add_option("--out", demo.out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*stage1) return run_fit_stage1(stage1_args);
    if (*recursive) return run_fit_recursive(rec_args);
    if (*reference) return run_fit_reference(ref_args);
    if (*diagnose) return run_diagnose(diag);
    if (*depletion) return run_depletion_demo(demo);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
