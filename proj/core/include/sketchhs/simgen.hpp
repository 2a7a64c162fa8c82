#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sketchhs/diagnostics.hpp"
#include "sketchhs/linalg.hpp"
#include "sketchhs/random.hpp"
#include "sketchhs/sampler.hpp"

namespace sketchhs {

enum class Scenario {
  Independent = 1,  ///< Sigma = I_p
  Compound = 2,     ///< Sigma = 0.5 I_p + 0.5 J_p
};

const char* to_string(Scenario scenario) noexcept;
Scenario scenario_from_string(const std::string& name);

struct ScenarioSpec {
  std::size_t n = 1000;
  std::size_t p = 10000;
  std::size_t s = 10;
  Scenario scenario = Scenario::Independent;
  double sigma2_true = 1.5;
  double signal_low = 1.5;
  double signal_high = 3.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rows x_i ~ N(0, Sigma). The compound design uses x = sqrt(.5) z0 1 + sqrt(.5) z,
/// which has covariance 0.5 I + 0.5 J exactly and costs O(n p).
Matrix generate_design(const ScenarioSpec& spec, Rng& rng);

/// s nonzero entries at uniformly chosen positions with magnitudes
/// U(signal_low, signal_high) and random signs; zeros elsewhere.
Vector generate_truth(const ScenarioSpec& spec, Rng& rng);

/// y = X beta + eps, eps ~ N(0, sigma2 I). sigma2 = 0 gives the noiseless response.
Vector generate_response(const Matrix& x, const Vector& beta_true, double sigma2, Rng& rng);

struct SimulatedData {
  Matrix x;
  Vector y;
  Vector beta_true;
};

/// Design, truth and response from independent substreams of spec.seed.
SimulatedData simulate(const ScenarioSpec& spec);

enum class Method {
  CHS,          ///< horseshoe on the Gaussian sketch
  FullHS,       ///< horseshoe on all n rows
  SubsampleHS,  ///< horseshoe on m rows drawn uniformly without replacement
};

const char* to_string(Method method) noexcept;
Method method_from_string(const std::string& name);

/// Row cap for running the fast sampler on uncompressed data when p is too
/// large for the direct sampler.
inline constexpr std::size_t kFullFastMaxRows = 4000;

bool full_fit_feasible(std::size_t n, std::size_t p) noexcept;

struct StudyConfig {
  ScenarioSpec scenario;
  std::vector<std::size_t> m_grid{100, 200, 300, 400, 500};
  std::size_t replications = 50;
  SamplerConfig sampler;
  std::vector<Method> comparators{Method::CHS, Method::FullHS};
  std::uint64_t seed = 0;  ///< master seed; every data, sketch and chain seed derives from it
  std::size_t hellinger_bins = kDefaultHellingerBins;
  unsigned workers = 1;    ///< 0 = hardware concurrency
  std::optional<std::string> chain_dump_dir;

  void validate() const;
};

/// One (replication, m, method) fit.
struct CellResult {
  Method method = Method::CHS;
  std::size_t m = 0;
  std::size_t replication = 0;
  std::size_t s = 0;
  Scenario scenario = Scenario::Independent;
  bool skipped = false;
  std::string skip_reason;
  std::uint64_t data_seed = 0;
  std::uint64_t sketch_seed = 0;
  std::uint64_t chain_seed = 0;
  std::optional<double> accuracy;  ///< mean Hellinger accuracy against FullHS
  EstimationReport estimation;
  EfficiencyReport efficiency;
  double sigma2_mean = 0.0;  ///< posterior mean of sigma^2 over kept draws
  double wall_seconds = 0.0;
  double per_iter_seconds = 0.0;
  std::size_t clamp_events = 0;
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};

struct AggregateRow {
  Method method = Method::CHS;
  std::size_t m = 0;
  std::size_t cells = 0;
  std::size_t skipped = 0;
  MetricSummary accuracy, mse, mse_nz, l2_error, mspe_proxy, coverage_all, coverage_nz,
      length_all, length_nz, ess_mean, efficiency, per_iter_seconds;
};

struct StudyReport {
  std::vector<CellResult> per_cell;  ///< ordered by (replication, m, method)
  std::vector<AggregateRow> aggregates;
  std::size_t skipped_cells() const;
};

/// Fits every requested method on one dataset for every m in the grid.
///
/// FullHS is fitted once and shared by all m (its cell is repeated per m);
/// CHS and SubsampleHS accuracy is measured against it when it ran.
/// Seeds come from (master_seed, replication, m, method).
std::vector<CellResult> compare_methods(const Vector& y, const Matrix& x,
                                        const std::optional<Vector>& beta_true,
                                        const std::vector<std::size_t>& m_grid,
                                        const std::vector<Method>& methods,
                                        const SamplerConfig& sampler, std::uint64_t master_seed,
                                        std::size_t replication,
                                        std::size_t hellinger_bins = kDefaultHellingerBins,
                                        const std::optional<std::string>& chain_dump_dir = {});

std::vector<AggregateRow> aggregate(const std::vector<CellResult>& cells);

/// Replicated study: fresh data and sketch per replication, cells executed
/// on a bounded worker pool, output independent of the worker count.
StudyReport run_study(const StudyConfig& config);

/// Seeds used for one replication's data / one cell's sketch / one cell's chain.
std::uint64_t replication_data_seed(std::uint64_t master, std::size_t replication);
std::uint64_t cell_sketch_seed(std::uint64_t master, std::size_t replication, std::size_t m);
std::uint64_t cell_chain_seed(std::uint64_t master, std::size_t replication, std::size_t m,
                              Method method);

}  // namespace sketchhs
