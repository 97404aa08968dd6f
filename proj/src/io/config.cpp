#include "ripple/io/config.hpp"

#include <fstream>
#include <functional>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "ripple/core/error.hpp"
#include "ripple/core/random.hpp"
#include "ripple/io/partitioning.hpp"
#include "ripple/io/tables.hpp"
#include "ripple/models/conjugate.hpp"
#include "ripple/models/logistic.hpp"

namespace ripple {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw std::invalid_argument("config key " + key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v.front() == '-') throw std::invalid_argument(v);
    const unsigned long long u = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::logic_error&) {
    throw std::invalid_argument("config key " + key + ": expected a non-negative integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config key " + key + ": expected true/false, got '" + v + "'");
}

void add_mcmc(std::map<std::string, Setter>& s, const std::string& section, RunConfig::Mcmc RunConfig::*m) {
  s[section + ".iterations"] = [m](RunConfig& c, const std::string& v) { (c.*m).iterations = to_uint("iterations", v); };
  s[section + ".warmup"] = [m](RunConfig& c, const std::string& v) { (c.*m).warmup = to_uint("warmup", v); };
  s[section + ".adapt_window"] = [m](RunConfig& c, const std::string& v) { (c.*m).adapt_window = to_uint("adapt_window", v); };
  s[section + ".target_accept"] = [m](RunConfig& c, const std::string& v) { (c.*m).target_accept = to_double("target_accept", v); };
  s[section + ".init_scale"] = [m](RunConfig& c, const std::string& v) { (c.*m).init_scale = to_double("init_scale", v); };
  s[section + ".chains"] = [m](RunConfig& c, const std::string& v) { (c.*m).chains = to_uint("chains", v); };
  s[section + ".blocks"] = [m](RunConfig& c, const std::string& v) { (c.*m).blocks = v; };
  s[section + ".init"] = [m](RunConfig& c, const std::string& v) {
    if (v != "default" && v != "truth") throw std::invalid_argument("config key init: expected default|truth");
    (c.*m).init = v;
  };
  s[section + ".seed"] = [m](RunConfig& c, const std::string& v) { (c.*m).seed = to_uint("seed", v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> s;
    s["model.kind"] = [](RunConfig& c, const std::string& v) {
      if (v != "logistic" && v != "sdm" && v != "conjugate") {
        throw std::invalid_argument("model.kind must be logistic, sdm or conjugate");
      }
      c.model.kind = v;
    };
    s["model.predictors"] = [](RunConfig& c, const std::string& v) {
      c.model.predictors = static_cast<Eigen::Index>(to_uint("model.predictors", v));
      c.model.sdm.predictors = static_cast<int>(c.model.predictors);
    };
    s["model.sigma_beta2"] = [](RunConfig& c, const std::string& v) { c.model.sigma_beta2 = to_double("model.sigma_beta2", v); };
    s["model.dim"] = [](RunConfig& c, const std::string& v) { c.model.dim = static_cast<Eigen::Index>(to_uint("model.dim", v)); };
    s["model.prior_var"] = [](RunConfig& c, const std::string& v) { c.model.prior_var = to_double("model.prior_var", v); };
    s["model.noise_var"] = [](RunConfig& c, const std::string& v) { c.model.noise_var = to_double("model.noise_var", v); };
    s["model.categories"] = [](RunConfig& c, const std::string& v) { c.model.sdm.categories = static_cast<int>(to_uint("model.categories", v)); };
    s["model.basis_wavelength"] = [](RunConfig& c, const std::string& v) { c.model.sdm.basis_wavelength = static_cast<int>(to_uint("model.basis_wavelength", v)); };
    s["model.basis_day"] = [](RunConfig& c, const std::string& v) { c.model.sdm.basis_day = static_cast<int>(to_uint("model.basis_day", v)); };
    s["model.tau2_beta"] = [](RunConfig& c, const std::string& v) { c.model.sdm.tau2_beta = to_double("model.tau2_beta", v); };
    s["model.tau2_gamma"] = [](RunConfig& c, const std::string& v) { c.model.sdm.tau2_gamma = to_double("model.tau2_gamma", v); };
    s["model.rho"] = [](RunConfig& c, const std::string& v) { c.model.sdm.rho = to_double("model.rho", v); };
    s["model.sigma_scale"] = [](RunConfig& c, const std::string& v) { c.model.sdm.sigma_scale = to_double("model.sigma_scale", v); };
    s["model.bands"] = [](RunConfig& c, const std::string& v) { c.model.sdm.bands = static_cast<int>(to_uint("model.bands", v)); };
    s["model.visits"] = [](RunConfig& c, const std::string& v) { c.model.sdm.visits = static_cast<int>(to_uint("model.visits", v)); };

    s["data.path"] = [](RunConfig& c, const std::string& v) { c.data.path = v; };
    s["data.sites"] = [](RunConfig& c, const std::string& v) { c.data.sites = v; };
    s["data.reflectances"] = [](RunConfig& c, const std::string& v) { c.data.reflectances = v; };
    s["data.truth"] = [](RunConfig& c, const std::string& v) { c.data.truth = v; };
    s["data.n"] = [](RunConfig& c, const std::string& v) { c.data.simulate_n = to_uint("data.n", v); };
    s["data.grid_side"] = [](RunConfig& c, const std::string& v) { c.data.grid_side = static_cast<int>(to_uint("data.grid_side", v)); };
    s["data.seed"] = [](RunConfig& c, const std::string& v) { c.data.seed = to_uint("data.seed", v); };

    s["partition.sizes"] = [](RunConfig& c, const std::string& v) { c.partition.sizes = v; };
    s["partition.batches"] = [](RunConfig& c, const std::string& v) { c.partition.batches = to_uint("partition.batches", v); };
    s["partition.seed"] = [](RunConfig& c, const std::string& v) { c.partition.seed = to_uint("partition.seed", v); };
    s["partition.design"] = [](RunConfig& c, const std::string& v) { c.partition.design = to_uint("partition.design", v); };

    s["sampler.lambda"] = [](RunConfig& c, const std::string& v) { c.sampler.lambda = to_double("sampler.lambda", v); };
    s["sampler.particles"] = [](RunConfig& c, const std::string& v) { c.sampler.particles = static_cast<Eigen::Index>(to_uint("sampler.particles", v)); };
    s["sampler.chains"] = [](RunConfig& c, const std::string& v) { c.sampler.chains = to_uint("sampler.chains", v); };
    s["sampler.warmup"] = [](RunConfig& c, const std::string& v) { c.sampler.warmup = to_uint("sampler.warmup", v); };
    s["sampler.blocks"] = [](RunConfig& c, const std::string& v) { c.sampler.blocks = v; };
    s["sampler.kernel"] = [](RunConfig& c, const std::string& v) {
      parse_kernel_kind(v);
      c.sampler.kernel = v;
    };
    s["sampler.seed"] = [](RunConfig& c, const std::string& v) { c.sampler.seed = to_uint("sampler.seed", v); };

    add_mcmc(s, "stage1", &RunConfig::stage1);
    add_mcmc(s, "reference", &RunConfig::reference);

    s["output.directory"] = [](RunConfig& c, const std::string& v) { c.output.directory = v; };
    s["output.binary"] = [](RunConfig& c, const std::string& v) { c.output.binary = to_bool("output.binary", v); };
    return s;
  }();
  return table;
}

std::filesystem::path resolve(const RunConfig& cfg, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || cfg.base_dir.empty()) return path;
  return cfg.base_dir / path;
}

void require_file(const RunConfig& cfg, const std::string& key, const std::string& p) {
  if (p.empty()) throw std::invalid_argument("config key " + key + " is required");
  if (!std::filesystem::exists(resolve(cfg, p))) {
    throw std::invalid_argument("config key " + key + ": file '" + resolve(cfg, p).string() + "' does not exist");
  }
}

}  // namespace

RunConfig parse_config(const std::map<std::string, std::string>& entries, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [key, value] : entries) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw std::invalid_argument("unknown config key '" + key + "'");
    it->second(cfg, value);
  }
  cfg.entries = entries;
  // File paths are echoed absolute so a manifest reproduces the run from any
  // directory.
  for (const char* key : {"data.path", "data.sites", "data.reflectances", "data.truth"}) {
    const auto it = cfg.entries.find(key);
    if (it != cfg.entries.end() && !it->second.empty()) {
      it->second = std::filesystem::absolute(resolve(cfg, it->second)).lexically_normal().string();
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw std::invalid_argument("config file '" + path.string() + "' does not exist");
  std::map<std::string, std::string> entries;
  if (path.extension() == ".json") {
    std::ifstream in(path);
    const nlohmann::json manifest = nlohmann::json::parse(in);
    if (!manifest.contains("config")) throw Error(path.string() + ": manifest has no config object");
    for (const auto& [key, value] : manifest.at("config").items()) entries[key] = value.get<std::string>();
  } else {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw Error(std::string("config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) throw std::invalid_argument("config key '" + section + "' is outside any section");
      for (const auto& [key, value] : body) entries[section + "." + key] = value.get_value<std::string>();
    }
  }
  return parse_config(entries, path.parent_path());
}

void override_config(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto entries = cfg.entries;
  entries[key] = value;
  cfg = parse_config(entries, cfg.base_dir);
}

std::unique_ptr<ModelSpec> load_model(const RunConfig& cfg) {
  const auto& m = cfg.model;
  if (m.kind == "logistic") {
    require_file(cfg, "data.path", cfg.data.path);
    return std::make_unique<LogisticModel>(m.predictors, m.sigma_beta2,
                                           load_logistic_table(resolve(cfg, cfg.data.path), m.predictors));
  }
  if (m.kind == "conjugate") {
    require_file(cfg, "data.path", cfg.data.path);
    return std::make_unique<ConjugateGaussianModel>(Vector::Zero(m.dim), Matrix::Identity(m.dim, m.dim) * m.prior_var,
                                                    m.noise_var, load_conjugate_table(resolve(cfg, cfg.data.path), m.dim));
  }
  require_file(cfg, "data.sites", cfg.data.sites);
  require_file(cfg, "data.reflectances", cfg.data.reflectances);
  return std::make_unique<SdmModel>(
      m.sdm, load_sdm_tables(resolve(cfg, cfg.data.sites), resolve(cfg, cfg.data.reflectances), m.sdm.predictors));
}

DataPartition partition_from_config(const RunConfig& cfg, std::size_t n) {
  const auto& p = cfg.partition;
  const std::vector<std::size_t> sizes = p.sizes == "equal" ? equal_sizes(n, p.batches) : parse_sizes(p.sizes);
  const std::uint64_t seed = derive_seed(p.seed, {p.design});
  return make_partition(n, sizes, seed, "design-" + std::to_string(p.design));
}

BlockStructure blocks_from_spec(const std::string& spec, const ModelSpec& model) {
  const Eigen::Index p = model.dim();
  if (spec == "joint") return BlockStructure::joint(p);
  if (spec == "singletons") {
    std::vector<IndexSet> blocks;
    for (Eigen::Index i = 0; i < p; ++i) blocks.push_back({i});
    return BlockStructure(blocks, p);
  }
  if (spec == "sdm") {
    const auto* sdm = dynamic_cast<const SdmModel*>(&model);
    if (!sdm) throw std::invalid_argument("block layout 'sdm' needs the sdm model");
    return BlockStructure(sdm->default_blocks(), p);
  }
  std::vector<IndexSet> blocks;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto end = std::min(spec.find(';', start), spec.size());
    IndexSet block;
    std::string part = spec.substr(start, end - start);
    std::size_t s = 0;
    while (s <= part.size()) {
      const auto e = std::min(part.find(',', s), part.size());
      const std::string item = part.substr(s, e - s);
      if (!item.empty()) block.push_back(static_cast<Eigen::Index>(to_uint("blocks", item)));
      s = e + 1;
    }
    blocks.push_back(std::move(block));
    start = end + 1;
  }
  return BlockStructure(blocks, p);
}

StageConfig stage_config(const RunConfig& cfg, const ModelSpec& model) {
  StageConfig sc;
  sc.lambda = cfg.sampler.lambda;
  sc.particles = cfg.sampler.particles;
  sc.chains = cfg.sampler.chains;
  sc.warmup = cfg.sampler.warmup;
  sc.seed = cfg.sampler.seed;
  sc.kernel_kind = parse_kernel_kind(cfg.sampler.kernel);
  if (cfg.sampler.blocks != "joint") sc.blocks = blocks_from_spec(cfg.sampler.blocks, model);
  sc.validate(model.dim());
  return sc;
}

RwmConfig rwm_config(const RunConfig::Mcmc& mcmc, const RunConfig& cfg, const ModelSpec& model, Eigen::Index draws) {
  RwmConfig rc;
  rc.iterations = mcmc.iterations;
  rc.warmup = mcmc.warmup;
  rc.adapt_window = mcmc.adapt_window;
  if (mcmc.target_accept > 0.0) rc.target_accept = mcmc.target_accept;
  rc.init_scale = mcmc.init_scale;
  rc.seed = mcmc.seed;
  rc.chains = mcmc.chains;
  rc.draws = draws;
  if (mcmc.blocks != "joint") rc.blocks = blocks_from_spec(mcmc.blocks, model);
  if (mcmc.init == "truth") {
    require_file(cfg, "data.truth", cfg.data.truth);
    const Vector natural = read_truth(resolve(cfg, cfg.data.truth), model.param_names());
    Vector init(natural.size());
    for (Eigen::Index i = 0; i < init.size(); ++i) {
      init(i) = to_unconstrained(model.transforms()[static_cast<std::size_t>(i)], natural(i));
    }
    rc.initial = init;
  }
  rc.validate(model.dim());
  return rc;
}

}  // namespace ripple
