#pragma once

#include <filesystem>
#include <string>

#include "sketchhs/simgen.hpp"

namespace sketchhs::config {

/// Study configuration file (YAML). Layout:
///
///   seed: 20240101
///   replications: 10
///   m_grid: [50, 100, 200, 400]
///   methods: [chs, full, subsample]
///   hellinger_bins: 512
///   workers: 0
///   scenario:
///     n: 800
///     p: 400
///     s: 5
///     design: independent      # or compound
///     sigma2: 1.5
///     signal: [1.5, 3.0]
///   sampler:
///     iters: 4000
///     burn: 1000
///     thin: 1
///     beta_method: auto        # fast | direct | auto
///     fixed_sigma: 1.0         # optional
///
/// Every key is optional; missing keys keep the StudyConfig defaults.
StudyConfig load_study_config(const std::filesystem::path& path);
StudyConfig parse_study_config(const std::string& yaml_text);

/// Only the `scenario:` section (plus top-level `seed`), used by `simulate`.
ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec parse_scenario(const std::string& yaml_text);

}  // namespace sketchhs::config
