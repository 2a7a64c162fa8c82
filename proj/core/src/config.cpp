#include "sketchhs/config.hpp"

#include <yaml-cpp/yaml.h>

#include "sketchhs/error.hpp"
#include "sketchhs/io.hpp"

namespace sketchhs::config {

namespace {

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (const YAML::Node v = node[key]) {
    try {
      out = v.as<T>();
    } catch (const YAML::Exception& e) {
      throw ValidationError(std::string("config key '") + key + "': " + e.what());
    }
  }
}

YAML::Node parse(const std::string& text) {
  try {
    YAML::Node root = YAML::Load(text);
    if (root.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) throw ValidationError("config: top level must be a mapping");
    return root;
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

void read_scenario(const YAML::Node& node, ScenarioSpec& spec) {
  if (!node) return;
  read(node, "n", spec.n);
  read(node, "p", spec.p);
  read(node, "s", spec.s);
  std::string design;
  read(node, "design", design);
  read(node, "scenario", design);
  if (!design.empty()) spec.scenario = scenario_from_string(design);
  read(node, "sigma2", spec.sigma2_true);
  if (const YAML::Node sig = node["signal"]) {
    if (!sig.IsSequence() || sig.size() != 2) {
      throw ValidationError("config: scenario.signal must be [low, high]");
    }
    spec.signal_low = sig[0].as<double>();
    spec.signal_high = sig[1].as<double>();
  }
}

void read_sampler(const YAML::Node& node, SamplerConfig& sampler) {
  if (!node) return;
  read(node, "iters", sampler.n_iter);
  read(node, "burn", sampler.n_burn);
  read(node, "thin", sampler.thin);
  std::string method;
  read(node, "beta_method", method);
  if (!method.empty()) sampler.beta_method = beta_method_from_string(method);
  if (node["fixed_sigma"]) {
    double v = 0.0;
    read(node, "fixed_sigma", v);
    sampler.fixed_sigma = v;
  }
}

}  // namespace

StudyConfig parse_study_config(const std::string& yaml_text) {
  const YAML::Node root = parse(yaml_text);
  StudyConfig cfg;
  read(root, "seed", cfg.seed);
  read(root, "replications", cfg.replications);
  read(root, "hellinger_bins", cfg.hellinger_bins);
  read(root, "workers", cfg.workers);
  if (root["m_grid"]) cfg.m_grid = root["m_grid"].as<std::vector<std::size_t>>();
  if (root["methods"]) {
    cfg.comparators.clear();
    for (const auto& name : root["methods"].as<std::vector<std::string>>()) {
      cfg.comparators.push_back(method_from_string(name));
    }
  }
  read_scenario(root["scenario"], cfg.scenario);
  cfg.scenario.seed = cfg.seed;
  read_sampler(root["sampler"], cfg.sampler);
  cfg.validate();
  return cfg;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  return parse_study_config(io::read_text(path));
}

ScenarioSpec parse_scenario(const std::string& yaml_text) {
  const YAML::Node root = parse(yaml_text);
  ScenarioSpec spec;
  read(root, "seed", spec.seed);
  read_scenario(root["scenario"] ? root["scenario"] : root, spec);
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  return parse_scenario(io::read_text(path));
}

}  // namespace sketchhs::config
