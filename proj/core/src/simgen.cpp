#include "sketchhs/simgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

#include "sketchhs/error.hpp"
#include "sketchhs/io.hpp"
#include "sketchhs/sketch.hpp"

namespace sketchhs {

namespace {

enum SeedDomain : std::uint64_t {
  kDataDomain = 0xda7a,
  kSketchDomain = 0x5ec7,
  kChainDomain = 0xc4a1,
  kDesignStream = 1,
  kTruthStream = 2,
  kNoiseStream = 3,
  kSubsampleStream = 4,
};

std::vector<Eigen::Index> sample_rows(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(idx[i], idx[i + rng.below(n - i)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void summarize(MetricSummary& out, const std::vector<double>& values) {
  out.count = values.size();
  if (values.empty()) return;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
}

}  // namespace

const char* to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::Independent:
      return "independent";
    case Scenario::Compound:
      return "compound";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "1" || name == "independent") return Scenario::Independent;
  if (name == "2" || name == "compound") return Scenario::Compound;
  throw ValidationError("unknown scenario '" + name + "' (expected 1/independent or 2/compound)");
}

void ScenarioSpec::validate() const {
  if (n == 0 || p == 0) throw ValidationError("scenario: n and p must be positive");
  if (s > p) throw ValidationError("scenario: s must not exceed p");
  if (!(signal_low < signal_high)) throw ValidationError("scenario: signal_low < signal_high");
  if (!(sigma2_true > 0.0) || !std::isfinite(sigma2_true)) {
    throw ValidationError("scenario: sigma2_true must be positive");
  }
}

Matrix generate_design(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(spec.p);
  Matrix x(n, p);
  if (spec.scenario == Scenario::Independent) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
    }
  } else {
    const double w = std::sqrt(0.5);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double common = w * rng.normal();
      for (Eigen::Index j = 0; j < p; ++j) x(i, j) = common + w * rng.normal();
    }
  }
  return x;
}

Vector generate_truth(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  Vector beta = Vector::Zero(static_cast<Eigen::Index>(spec.p));
  for (Eigen::Index j : sample_rows(spec.p, spec.s, rng)) {
    const double magnitude = rng.uniform(spec.signal_low, spec.signal_high);
    beta[j] = rng.uniform() < 0.5 ? -magnitude : magnitude;
  }
  return beta;
}

Vector generate_response(const Matrix& x, const Vector& beta_true, double sigma2, Rng& rng) {
  if (x.cols() != beta_true.size()) throw ValidationError("generate_response: cols(X) != len(beta)");
  if (!(sigma2 >= 0.0)) throw ValidationError("generate_response: sigma2 must be nonnegative");
  Vector y = x * beta_true;
  if (sigma2 > 0.0) {
    const double sd = std::sqrt(sigma2);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sd * rng.normal();
  }
  return y;
}

SimulatedData simulate(const ScenarioSpec& spec) {
  spec.validate();
  Rng design_rng(derive_seed(spec.seed, {kDesignStream}));
  Rng truth_rng(derive_seed(spec.seed, {kTruthStream}));
  Rng noise_rng(derive_seed(spec.seed, {kNoiseStream}));
  SimulatedData out;
  out.x = generate_design(spec, design_rng);
  out.beta_true = generate_truth(spec, truth_rng);
  out.y = generate_response(out.x, out.beta_true, spec.sigma2_true, noise_rng);
  return out;
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::CHS:
      return "CHS";
    case Method::FullHS:
      return "FullHS";
    case Method::SubsampleHS:
      return "SubsampleHS";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "chs" || lower == "sketch") return Method::CHS;
  if (lower == "fullhs" || lower == "full") return Method::FullHS;
  if (lower == "subsamplehs" || lower == "subsample") return Method::SubsampleHS;
  throw ValidationError("unknown method '" + name + "' (expected chs, full or subsample)");
}

bool full_fit_feasible(std::size_t n, std::size_t p) noexcept {
  return p <= kDirectMaxFeatures || n <= kFullFastMaxRows;
}

void StudyConfig::validate() const {
  scenario.validate();
  if (replications == 0) throw ValidationError("study: replications must be >= 1");
  if (m_grid.empty()) throw ValidationError("study: m_grid is empty");
  for (std::size_t m : m_grid) {
    if (m == 0 || m >= scenario.n) {
      throw ValidationError("study: every m must satisfy 1 <= m < n (sketch must strictly compress)");
    }
  }
  if (comparators.empty()) throw ValidationError("study: no comparators");
  if (hellinger_bins == 0) throw ValidationError("study: hellinger_bins must be positive");
  sampler.validate();
}

std::size_t StudyReport::skipped_cells() const {
  return static_cast<std::size_t>(
      std::count_if(per_cell.begin(), per_cell.end(), [](const CellResult& c) { return c.skipped; }));
}

std::uint64_t replication_data_seed(std::uint64_t master, std::size_t replication) {
  return derive_seed(master, {kDataDomain, replication});
}

std::uint64_t cell_sketch_seed(std::uint64_t master, std::size_t replication, std::size_t m) {
  return derive_seed(master, {kSketchDomain, replication, m});
}

std::uint64_t cell_chain_seed(std::uint64_t master, std::size_t replication, std::size_t m,
                              Method method) {
  return derive_seed(master, {kChainDomain, replication, m, static_cast<std::uint64_t>(method)});
}

std::vector<CellResult> compare_methods(const Vector& y, const Matrix& x,
                                        const std::optional<Vector>& beta_true,
                                        const std::vector<std::size_t>& m_grid,
                                        const std::vector<Method>& methods,
                                        const SamplerConfig& sampler, std::uint64_t master_seed,
                                        std::size_t replication, std::size_t hellinger_bins,
                                        const std::optional<std::string>& chain_dump_dir) {
  if (y.size() != x.rows()) throw ValidationError("compare: len(y) != rows(X)");
  if (beta_true && beta_true->size() != x.cols()) {
    throw ValidationError("compare: len(beta_true) != cols(X)");
  }
  sampler.validate();
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  const bool want_full =
      std::find(methods.begin(), methods.end(), Method::FullHS) != methods.end();

  auto dump = [&](const ChainOutput& chain, const SamplerConfig& cfg, Method method, std::size_t m) {
    if (!chain_dump_dir) return;
    std::filesystem::create_directories(*chain_dump_dir);
    const auto name = "chain_rep" + std::to_string(replication) + "_m" + std::to_string(m) + "_" +
                      to_string(method) + ".csv";
    io::write_chain(std::filesystem::path(*chain_dump_dir) / name, chain, cfg);
  };

  auto fill_reports = [&](CellResult& cell, const ChainOutput& chain) {
    cell.wall_seconds = chain.wall_seconds;
    cell.per_iter_seconds = chain.per_iter_seconds;
    cell.clamp_events = chain.clamp_events;
    cell.sigma2_mean = chain.sigma2_draws.size() ? chain.sigma2_draws.mean() : 0.0;
    cell.efficiency = efficiency_report(chain.beta_draws, chain.wall_seconds);
    if (beta_true) cell.estimation = estimation_report(chain.beta_draws, *beta_true, &x);
  };

  std::optional<ChainOutput> full_chain;
  std::optional<CellResult> full_cell;
  if (want_full) {
    CellResult cell;
    cell.method = Method::FullHS;
    cell.replication = replication;
    cell.chain_seed = cell_chain_seed(master_seed, replication, 0, Method::FullHS);
    if (!full_fit_feasible(n, p)) {
      cell.skipped = true;
      cell.skip_reason = "full-data fit infeasible at n=" + std::to_string(n) +
                         ", p=" + std::to_string(p);
    } else {
      SamplerConfig cfg = sampler;
      cfg.seed = cell.chain_seed;
      cfg.beta_method = BetaMethod::Auto;
      const SketchedData full = SketchedData::unsketched(y, x);
      full_chain = run_chain(full, cfg);
      fill_reports(cell, *full_chain);
      dump(*full_chain, cfg, Method::FullHS, n);
    }
    full_cell = std::move(cell);
  }

  std::vector<CellResult> cells;
  for (std::size_t m : m_grid) {
    for (Method method : methods) {
      if (method == Method::FullHS) {
        CellResult cell = *full_cell;
        cell.m = m;
        cells.push_back(std::move(cell));
        continue;
      }
      CellResult cell;
      cell.method = method;
      cell.m = m;
      cell.replication = replication;
      cell.sketch_seed = cell_sketch_seed(master_seed, replication, m);
      cell.chain_seed = cell_chain_seed(master_seed, replication, m, method);
      if (m == 0 || m >= n) {
        cell.skipped = true;
        cell.skip_reason = "sketch must strictly compress (m < n)";
        cells.push_back(std::move(cell));
        continue;
      }

      SketchedData data;
      if (method == Method::CHS) {
        const SketchMatrix phi = generate_sketch_matrix(m, n, cell.sketch_seed);
        data = apply_sketch(phi, y, x);
      } else {
        Rng rng(derive_seed(cell.sketch_seed, {kSubsampleStream}));
        const auto rows = sample_rows(n, m, rng);
        data = SketchedData::unsketched(y(rows), x(rows, Eigen::all));
        data.seed = cell.sketch_seed;
      }
      SamplerConfig cfg = sampler;
      cfg.seed = cell.chain_seed;
      const ChainOutput chain = run_chain(data, cfg);
      fill_reports(cell, chain);
      if (full_chain) {
        cell.accuracy =
            hellinger_accuracy(chain.beta_draws, full_chain->beta_draws, hellinger_bins).mean_accuracy;
      }
      dump(chain, cfg, method, m);
      cells.push_back(std::move(cell));
    }
  }
  if (beta_true) {
    const auto s_true = static_cast<std::size_t>((beta_true->array() != 0.0).count());
    for (CellResult& c : cells) c.s = s_true;
  }
  return cells;
}

std::vector<AggregateRow> aggregate(const std::vector<CellResult>& cells) {
  std::vector<std::pair<Method, std::size_t>> order;
  std::map<std::pair<Method, std::size_t>, std::vector<const CellResult*>> groups;
  for (const CellResult& c : cells) {
    const auto key = std::make_pair(c.method, c.m);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&c);
  }

  std::vector<AggregateRow> rows;
  for (const auto& key : order) {
    AggregateRow row;
    row.method = key.first;
    row.m = key.second;
    std::vector<double> acc, mse, mse_nz, l2, mspe, cov, cov_nz, len, len_nz, ess, eff, per_iter;
    for (const CellResult* c : groups[key]) {
      ++row.cells;
      if (c->skipped) {
        ++row.skipped;
        continue;
      }
      if (c->accuracy) acc.push_back(*c->accuracy);
      const EstimationReport& e = c->estimation;
      if (e.beta_hat.size() > 0) {
        mse.push_back(e.mse);
        l2.push_back(e.l2_error);
        cov.push_back(e.coverage_all);
        len.push_back(e.length_all);
        if (e.mse_nz) mse_nz.push_back(*e.mse_nz);
        if (e.coverage_nz) cov_nz.push_back(*e.coverage_nz);
        if (e.length_nz) len_nz.push_back(*e.length_nz);
        if (e.mspe_proxy) mspe.push_back(*e.mspe_proxy);
      }
      ess.push_back(c->efficiency.ess_mean);
      eff.push_back(c->efficiency.efficiency);
      per_iter.push_back(c->per_iter_seconds);
    }
    summarize(row.accuracy, acc);
    summarize(row.mse, mse);
    summarize(row.mse_nz, mse_nz);
    summarize(row.l2_error, l2);
    summarize(row.mspe_proxy, mspe);
    summarize(row.coverage_all, cov);
    summarize(row.coverage_nz, cov_nz);
    summarize(row.length_all, len);
    summarize(row.length_nz, len_nz);
    summarize(row.ess_mean, ess);
    summarize(row.efficiency, eff);
    summarize(row.per_iter_seconds, per_iter);
    rows.push_back(row);
  }
  return rows;
}

StudyReport run_study(const StudyConfig& config) {
  config.validate();
  const std::size_t reps = config.replications;
  std::vector<std::vector<CellResult>> slots(reps);
  std::vector<std::exception_ptr> errors(reps);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t rep = next++; rep < reps; rep = next++) {
      try {
        ScenarioSpec spec = config.scenario;
        spec.seed = replication_data_seed(config.seed, rep);
        const SimulatedData sim = simulate(spec);
        auto cells = compare_methods(sim.y, sim.x, sim.beta_true, config.m_grid,
                                     config.comparators, config.sampler, config.seed, rep,
                                     config.hellinger_bins, config.chain_dump_dir);
        for (CellResult& c : cells) {
          c.data_seed = spec.seed;
          c.s = spec.s;
          c.scenario = spec.scenario;
        }
        slots[rep] = std::move(cells);
      } catch (...) {
        errors[rep] = std::current_exception();
      }
    }
  };

  unsigned workers = config.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : config.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  StudyReport report;
  for (auto& slot : slots) {
    for (auto& cell : slot) report.per_cell.push_back(std::move(cell));
  }
  report.aggregates = aggregate(report.per_cell);
  return report;
}

}  // namespace sketchhs
