#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sketchhs::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNumerical = 3,
  kPartial = 4,
};

struct SamplerFlags {
  std::size_t iters = 4000;
  std::size_t burn = 1000;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  std::optional<double> fixed_sigma;
  std::string beta_method = "fast";
};

struct SimulateOptions {
  std::string config;
  std::optional<std::size_t> n, p, s;
  std::optional<std::string> scenario;
  std::optional<double> sigma2;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct FitOptions {
  std::string data;
  std::string csv;
  std::string response = "y";
  long long m = 0;
  SamplerFlags sampler;
  std::string out;
  unsigned sketch_threads = 1;
};

struct CompareOptions {
  std::string data;
  std::vector<std::size_t> m_grid;
  std::vector<std::string> methods{"chs"};
  SamplerFlags sampler;
  std::size_t reps = 1;
  std::size_t bins = 512;
  std::string out;
  bool dump_chains = false;
};

struct StudyOptions {
  std::string config;
  std::string out;
  std::optional<unsigned> workers;
  bool dump_chains = false;
};

struct VerifyOptions {
  std::string scale = "quick";
  std::uint64_t seed = 20240607;
  std::string out;
};

int cmd_simulate(const SimulateOptions& opts, const std::vector<std::string>& argv);
int cmd_fit(const FitOptions& opts, const std::vector<std::string>& argv);
int cmd_compare(const CompareOptions& opts, const std::vector<std::string>& argv);
int cmd_study(const StudyOptions& opts, const std::vector<std::string>& argv);
int cmd_verify(const VerifyOptions& opts, const std::vector<std::string>& argv);

}  // namespace sketchhs::cli
