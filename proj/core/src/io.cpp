#include "sketchhs/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sketchhs/digest.hpp"
#include "sketchhs/error.hpp"
#include "sketchhs/version.hpp"

namespace sketchhs::io {

using nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_number(std::string_view field, double& out) {
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

ordered_json summary_json(const MetricSummary& s) {
  ordered_json j;
  j["mean"] = s.count > 0 ? ordered_json(s.mean) : ordered_json(nullptr);
  j["sd"] = s.count > 1 ? ordered_json(s.sd) : ordered_json(nullptr);
  j["count"] = s.count;
  return j;
}

std::string summary_fields(const MetricSummary& s) {
  return (s.count > 0 ? format_double(s.mean) : std::string()) + "," +
         (s.count > 1 ? format_double(s.sd) : std::string());
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  CsvTable table;
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_number(fields[i], row[i]);
    if (rows == 0 && cols == 0 && table.header.empty() && !numeric) {
      for (auto f : fields) table.header.emplace_back(f);
      cols = fields.size();
      continue;
    }
    if (!numeric) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(cols) + " fields, got " + std::to_string(fields.size()));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  table.values = Eigen::Map<const RowMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                             static_cast<Eigen::Index>(cols));
  return table;
}

void write_csv(const fs::path& path, const Matrix& values, const std::vector<std::string>& header) {
  std::string text;
  if (!header.empty()) {
    if (static_cast<Eigen::Index>(header.size()) != values.cols()) {
      throw ValidationError("write_csv: header width does not match matrix");
    }
    for (std::size_t j = 0; j < header.size(); ++j) text += (j ? "," : "") + header[j];
    text += '\n';
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) text += ',';
      text += format_double(values(i, j));
    }
    text += '\n';
  }
  write_text(path, text);
}

void write_vector_csv(const fs::path& path, const Vector& values, const std::string& name) {
  write_csv(path, values, {name});
}

Vector read_vector_csv(const fs::path& path) {
  const CsvTable t = read_csv(path);
  if (t.values.cols() != 1) throw ValidationError(path.string() + ": expected a single column");
  return t.values.col(0);
}

RegressionTable split_response(const CsvTable& table, const std::string& response) {
  const Eigen::Index cols = table.values.cols();
  Eigen::Index target = -1;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (table.header[j] == response) target = static_cast<Eigen::Index>(j);
  }
  if (target < 0) {
    long long idx = -1;
    const auto res = std::from_chars(response.data(), response.data() + response.size(), idx);
    if (res.ec == std::errc() && res.ptr == response.data() + response.size()) target = idx;
  }
  if (target < 0 || target >= cols) {
    throw ValidationError("response column '" + response + "' not found");
  }
  if (cols < 2) throw ValidationError("data needs a response and at least one feature column");
  RegressionTable out;
  out.y = table.values.col(target);
  out.x.resize(table.values.rows(), cols - 1);
  for (Eigen::Index j = 0, k = 0; j < cols; ++j) {
    if (j != target) out.x.col(k++) = table.values.col(j);
  }
  return out;
}

void write_dataset_bundle(const fs::path& dir, const Matrix& x, const Vector& y,
                          const Vector& beta_true) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < x.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
  write_csv(dir / "X.csv", x, header);
  write_vector_csv(dir / "y.csv", y, "y");
  write_vector_csv(dir / "beta_true.csv", beta_true, "beta_true");
}

DatasetBundle read_dataset_bundle(const fs::path& dir) {
  DatasetBundle b;
  b.x = read_csv(dir / "X.csv").values;
  b.y = read_vector_csv(dir / "y.csv");
  if (b.y.size() != b.x.rows()) throw ValidationError("dataset bundle: len(y) != rows(X)");
  if (fs::exists(dir / "beta_true.csv")) {
    b.beta_true = read_vector_csv(dir / "beta_true.csv");
    if (b.beta_true->size() != b.x.cols()) {
      throw ValidationError("dataset bundle: len(beta_true) != cols(X)");
    }
  }
  return b;
}

std::vector<fs::path> write_sketch_bundle(const fs::path& dir, const SketchedData& data) {
  data.validate();
  std::vector<std::string> header;
  for (std::size_t j = 0; j < data.p(); ++j) header.push_back("x" + std::to_string(j + 1));
  write_csv(dir / "x_tilde.csv", data.x_tilde, header);
  write_vector_csv(dir / "y_tilde.csv", data.y_tilde, "y_tilde");
  ordered_json meta;
  meta["m"] = data.m();
  meta["n"] = data.n;
  meta["p"] = data.p();
  meta["seed"] = data.seed;
  meta["source_hash"] = data.source_hash;
  meta["kind"] = to_string(data.kind);
  meta["sketched"] = data.sketched;
  write_text(dir / "meta.json", meta.dump(2) + "\n");
  return {dir / "y_tilde.csv", dir / "x_tilde.csv", dir / "meta.json"};
}

SketchedData read_sketch_bundle(const fs::path& dir) {
  const auto meta = ordered_json::parse(read_text(dir / "meta.json"));
  SketchedData d;
  d.y_tilde = read_vector_csv(dir / "y_tilde.csv");
  d.x_tilde = read_csv(dir / "x_tilde.csv").values;
  d.n = meta.at("n").get<std::size_t>();
  d.seed = meta.at("seed").get<std::uint64_t>();
  d.source_hash = meta.at("source_hash").get<std::string>();
  d.sketched = meta.value("sketched", true);
  if (meta.at("m").get<std::size_t>() != d.m() || meta.at("p").get<std::size_t>() != d.p()) {
    throw ValidationError("sketch bundle: meta.json dimensions disagree with the CSV files");
  }
  d.validate();
  return d;
}

std::vector<fs::path> write_chain(const fs::path& csv_path, const ChainOutput& chain,
                                  const SamplerConfig& config) {
  const Eigen::Index p = chain.beta_draws.cols();
  Matrix table(chain.beta_draws.rows(), p + 2);
  table.leftCols(p) = chain.beta_draws;
  table.col(p) = chain.tau_draws;
  table.col(p + 1) = chain.sigma2_draws;
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < p; ++j) header.push_back("beta_" + std::to_string(j + 1));
  header.emplace_back("tau");
  header.emplace_back("sigma2");
  write_csv(csv_path, table, header);

  ordered_json side;
  side["config"] = {{"n_iter", config.n_iter},
                    {"n_burn", config.n_burn},
                    {"thin", config.thin},
                    {"seed", config.seed},
                    {"fixed_sigma", config.fixed_sigma ? ordered_json(*config.fixed_sigma)
                                                       : ordered_json(nullptr)},
                    {"beta_method", to_string(config.beta_method)}};
  side["beta_method_used"] = to_string(chain.beta_method);
  side["seed"] = chain.seed;
  side["kept"] = chain.kept();
  side["p"] = p;
  side["clamp_events"] = chain.clamp_events;
  side["wall_seconds"] = chain.wall_seconds;
  side["per_iter_seconds"] = chain.per_iter_seconds;
  fs::path json_path = csv_path;
  json_path.replace_extension(".json");
  write_text(json_path, side.dump(2) + "\n");
  return {csv_path, json_path};
}

std::string estimation_json(const EstimationReport& r) {
  ordered_json j;
  j["mse"] = r.mse;
  j["mse_nz"] = optional_json(r.mse_nz);
  j["l2_error"] = r.l2_error;
  j["mspe_proxy"] = optional_json(r.mspe_proxy);
  j["coverage_all"] = r.coverage_all;
  j["coverage_nz"] = optional_json(r.coverage_nz);
  j["length_all"] = r.length_all;
  j["length_nz"] = optional_json(r.length_nz);
  j["nonzero"] = r.nonzero;
  return j.dump(2) + "\n";
}

std::string efficiency_json(const EfficiencyReport& r) {
  ordered_json j;
  j["ess_mean"] = r.ess_mean;
  j["wall_hours"] = r.wall_hours;
  j["efficiency"] = r.efficiency;
  j["constant_chains"] = r.constant_chains;
  return j.dump(2) + "\n";
}

std::string accuracy_json(const AccuracyReport& r) {
  ordered_json j;
  j["mean_accuracy"] = r.mean_accuracy;
  j["grid_bins"] = r.grid_bins;
  j["per_coeff"] = std::vector<double>(r.per_coeff.data(), r.per_coeff.data() + r.per_coeff.size());
  return j.dump(2) + "\n";
}

void write_accuracy_csv(const fs::path& path, const AccuracyReport& r) {
  std::string text = "coefficient,accuracy,support_lo,support_hi\n";
  for (Eigen::Index j = 0; j < r.per_coeff.size(); ++j) {
    text += std::to_string(j + 1) + "," + format_double(r.per_coeff[j]) + "," +
            format_double(r.support_lo[j]) + "," + format_double(r.support_hi[j]) + "\n";
  }
  write_text(path, text);
}

void write_estimation_csv(const fs::path& path, const EstimationReport& r, const Vector& beta_true) {
  std::string text = "coefficient,beta_true,beta_hat,lower,upper,covered\n";
  for (Eigen::Index j = 0; j < r.beta_hat.size(); ++j) {
    const bool covered = r.lower[j] <= beta_true[j] && beta_true[j] <= r.upper[j];
    text += std::to_string(j + 1) + "," + format_double(beta_true[j]) + "," +
            format_double(r.beta_hat[j]) + "," + format_double(r.lower[j]) + "," +
            format_double(r.upper[j]) + "," + (covered ? "1" : "0") + "\n";
  }
  write_text(path, text);
}

std::string study_cells_csv(const std::vector<CellResult>& cells, bool include_timings) {
  std::string text =
      "replication,method,m,s,scenario,status,skip_reason,data_seed,sketch_seed,chain_seed,"
      "accuracy,mse,mse_nz,l2_error,mspe_proxy,coverage_all,coverage_nz,length_all,length_nz,"
      "ess_mean,sigma2_mean,clamp_events";
  if (include_timings) text += ",wall_seconds,per_iter_seconds,efficiency";
  text += '\n';
  for (const CellResult& c : cells) {
    const EstimationReport& e = c.estimation;
    const bool has_est = !c.skipped && e.beta_hat.size() > 0;
    auto est = [&](double v) { return has_est ? format_double(v) : std::string(); };
    text += std::to_string(c.replication) + "," + to_string(c.method) + "," + std::to_string(c.m) +
            "," + std::to_string(c.s) + "," + to_string(c.scenario) + "," +
            (c.skipped ? "skipped" : "ok") + "," + c.skip_reason + "," +
            std::to_string(c.data_seed) + "," + std::to_string(c.sketch_seed) + "," +
            std::to_string(c.chain_seed) + "," + optional_field(c.accuracy) + "," + est(e.mse) +
            "," + optional_field(e.mse_nz) + "," + est(e.l2_error) + "," +
            optional_field(e.mspe_proxy) + "," + est(e.coverage_all) + "," +
            optional_field(e.coverage_nz) + "," + est(e.length_all) + "," +
            optional_field(e.length_nz) + "," +
            (c.skipped ? std::string() : format_double(c.efficiency.ess_mean)) + "," +
            (c.skipped ? std::string() : format_double(c.sigma2_mean)) + "," +
            std::to_string(c.clamp_events);
    if (include_timings) {
      text += c.skipped ? ",,," : "," + format_double(c.wall_seconds) + "," +
                                      format_double(c.per_iter_seconds) + "," +
                                      format_double(c.efficiency.efficiency);
    }
    text += '\n';
  }
  return text;
}

std::string study_summary_csv(const std::vector<AggregateRow>& rows, bool include_timings) {
  std::string text =
      "method,m,cells,skipped,accuracy_mean,accuracy_sd,mse_mean,mse_sd,mse_nz_mean,mse_nz_sd,"
      "l2_error_mean,l2_error_sd,mspe_proxy_mean,mspe_proxy_sd,coverage_all_mean,coverage_all_sd,"
      "coverage_nz_mean,coverage_nz_sd,length_all_mean,length_all_sd,length_nz_mean,length_nz_sd,"
      "ess_mean,ess_sd";
  if (include_timings) text += ",efficiency_mean,efficiency_sd,per_iter_seconds_mean,per_iter_seconds_sd";
  text += '\n';
  for (const AggregateRow& r : rows) {
    text += std::string(to_string(r.method)) + "," + std::to_string(r.m) + "," +
            std::to_string(r.cells) + "," + std::to_string(r.skipped) + "," +
            summary_fields(r.accuracy) + "," + summary_fields(r.mse) + "," +
            summary_fields(r.mse_nz) + "," + summary_fields(r.l2_error) + "," +
            summary_fields(r.mspe_proxy) + "," + summary_fields(r.coverage_all) + "," +
            summary_fields(r.coverage_nz) + "," + summary_fields(r.length_all) + "," +
            summary_fields(r.length_nz) + "," + summary_fields(r.ess_mean);
    if (include_timings) {
      text += "," + summary_fields(r.efficiency) + "," + summary_fields(r.per_iter_seconds);
    }
    text += '\n';
  }
  return text;
}

std::string study_summary_json(const StudyReport& report, const StudyConfig& config,
                               bool include_timings) {
  ordered_json j;
  const ScenarioSpec& s = config.scenario;
  j["config"] = {{"seed", config.seed},
                 {"replications", config.replications},
                 {"m_grid", config.m_grid},
                 {"hellinger_bins", config.hellinger_bins},
                 {"scenario",
                  {{"n", s.n},
                   {"p", s.p},
                   {"s", s.s},
                   {"design", to_string(s.scenario)},
                   {"sigma2", s.sigma2_true},
                   {"signal", {s.signal_low, s.signal_high}}}},
                 {"sampler",
                  {{"iters", config.sampler.n_iter},
                   {"burn", config.sampler.n_burn},
                   {"thin", config.sampler.thin},
                   {"beta_method", to_string(config.sampler.beta_method)}}}};
  std::vector<std::string> methods;
  for (Method m : config.comparators) methods.emplace_back(to_string(m));
  j["config"]["methods"] = methods;
  j["cells"] = report.per_cell.size();
  j["skipped_cells"] = report.skipped_cells();
  ordered_json rows = ordered_json::array();
  for (const AggregateRow& r : report.aggregates) {
    ordered_json row;
    row["method"] = to_string(r.method);
    row["m"] = r.m;
    row["cells"] = r.cells;
    row["skipped"] = r.skipped;
    row["accuracy"] = summary_json(r.accuracy);
    row["mse"] = summary_json(r.mse);
    row["mse_nz"] = summary_json(r.mse_nz);
    row["l2_error"] = summary_json(r.l2_error);
    row["mspe_proxy"] = summary_json(r.mspe_proxy);
    row["coverage_all"] = summary_json(r.coverage_all);
    row["coverage_nz"] = summary_json(r.coverage_nz);
    row["length_all"] = summary_json(r.length_all);
    row["length_nz"] = summary_json(r.length_nz);
    row["ess_mean"] = summary_json(r.ess_mean);
    if (include_timings) {
      row["efficiency"] = summary_json(r.efficiency);
      row["per_iter_seconds"] = summary_json(r.per_iter_seconds);
    }
    rows.push_back(row);
  }
  j["aggregates"] = rows;
  return j.dump(2) + "\n";
}

void write_manifest(const fs::path& path, RunManifest manifest) {
  if (manifest.version.empty()) manifest.version = std::string("sketchhs ") + kVersion;
  for (const auto& a : manifest.artifact_paths) {
    if (fs::exists(a)) manifest.artifact_digests[a] = sha256_file(a);
  }
  ordered_json j;
  j["command"] = manifest.command;
  j["config_digest"] = manifest.config_digest;
  j["seeds"] = manifest.seeds;
  j["artifact_paths"] = manifest.artifact_paths;
  j["artifact_digests"] = manifest.artifact_digests;
  j["version"] = manifest.version;
  j["timings"] = manifest.timings;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace sketchhs::io
