#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sketchhs/diagnostics.hpp"
#include "sketchhs/linalg.hpp"
#include "sketchhs/sampler.hpp"
#include "sketchhs/simgen.hpp"
#include "sketchhs/sketch.hpp"

namespace sketchhs::io {

namespace fs = std::filesystem;

struct CsvTable {
  std::vector<std::string> header;  ///< empty for headerless files
  Matrix values;
};

/// Reads a numeric CSV. The first line is treated as a header when any of
/// its fields fails to parse as a number.
CsvTable read_csv(const fs::path& path);

void write_csv(const fs::path& path, const Matrix& values,
               const std::vector<std::string>& header = {});
void write_vector_csv(const fs::path& path, const Vector& values, const std::string& name);
Vector read_vector_csv(const fs::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Splits a raw data table into (y, X): `response` is a column name, or a
/// 0-based index when it parses as an integer. All other columns are features.
struct RegressionTable {
  Vector y;
  Matrix x;
};
RegressionTable split_response(const CsvTable& table, const std::string& response);

/// Dataset bundle as written by `simulate`: X.csv, y.csv and optionally beta_true.csv.
struct DatasetBundle {
  Matrix x;
  Vector y;
  std::optional<Vector> beta_true;
};
void write_dataset_bundle(const fs::path& dir, const Matrix& x, const Vector& y,
                          const Vector& beta_true);
DatasetBundle read_dataset_bundle(const fs::path& dir);

/// Sketched bundle: y_tilde.csv, x_tilde.csv and meta.json (m, n, p, seed,
/// source_hash, kind). Never contains raw rows.
std::vector<fs::path> write_sketch_bundle(const fs::path& dir, const SketchedData& data);
SketchedData read_sketch_bundle(const fs::path& dir);

/// One row per kept draw: beta_1..beta_p, tau, sigma2. The JSON sidecar
/// records the config, seed, timings and clamp count.
std::vector<fs::path> write_chain(const fs::path& csv_path, const ChainOutput& chain,
                                  const SamplerConfig& config);

std::string estimation_json(const EstimationReport& report);
std::string efficiency_json(const EfficiencyReport& report);
std::string accuracy_json(const AccuracyReport& report);
void write_accuracy_csv(const fs::path& path, const AccuracyReport& report);
void write_estimation_csv(const fs::path& path, const EstimationReport& report,
                          const Vector& beta_true);

/// Long-format per-cell CSV. Timing-derived columns (wall time, per-iteration
/// time, efficiency) are omitted unless `include_timings`, which keeps the
/// default output byte-identical across reruns.
std::string study_cells_csv(const std::vector<CellResult>& cells, bool include_timings);
/// One row per (method, m) in the column order of the accuracy / efficiency tables.
std::string study_summary_csv(const std::vector<AggregateRow>& rows, bool include_timings);
std::string study_summary_json(const StudyReport& report, const StudyConfig& config,
                               bool include_timings);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

/// Record of one CLI invocation.
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> artifact_paths;
  std::string version;
  std::map<std::string, double> timings;
  std::map<std::string, std::string> artifact_digests;
};

/// Fills artifact_digests from the listed paths and writes manifest.json.
void write_manifest(const fs::path& path, RunManifest manifest);

}  // namespace sketchhs::io
