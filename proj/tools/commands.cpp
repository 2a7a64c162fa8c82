#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>

#include <json.hpp>

#include "sketchhs/config.hpp"
#include "sketchhs/diagnostics.hpp"
#include "sketchhs/digest.hpp"
#include "sketchhs/error.hpp"
#include "sketchhs/io.hpp"
#include "sketchhs/random.hpp"
#include "sketchhs/sampler.hpp"
#include "sketchhs/simgen.hpp"
#include "sketchhs/sketch.hpp"

namespace sketchhs::cli {

namespace fs = std::filesystem;

namespace {

class PhaseTimer {
 public:
  explicit PhaseTimer(io::RunManifest& manifest) : manifest_(manifest) {}
  template <typename F>
  auto run(const std::string& phase, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(phase, start);
    } else {
      auto result = f();
      record(phase, start);
      return result;
    }
  }

 private:
  void record(const std::string& phase, std::chrono::steady_clock::time_point start) {
    manifest_.timings[phase] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  io::RunManifest& manifest_;
};

std::string joined(const std::vector<std::string>& argv) {
  std::string s;
  for (std::size_t i = 1; i < argv.size(); ++i) s += (i > 1 ? " " : "") + argv[i];
  return s;
}

io::RunManifest start_manifest(const std::string& name, const std::vector<std::string>& argv,
                               const std::string& config_path = {}) {
  io::RunManifest m;
  m.command = name + ": " + joined(argv);
  m.config_digest = config_path.empty() ? sha256_hex(joined(argv)) : sha256_file(config_path);
  return m;
}

SamplerConfig sampler_config(const SamplerFlags& f) {
  SamplerConfig cfg;
  cfg.n_iter = f.iters;
  cfg.n_burn = f.burn;
  cfg.thin = f.thin;
  cfg.seed = f.seed;
  cfg.fixed_sigma = f.fixed_sigma;
  cfg.beta_method = beta_method_from_string(f.beta_method);
  cfg.validate();
  return cfg;
}

void track(io::RunManifest& manifest, const std::vector<fs::path>& paths) {
  for (const auto& p : paths) manifest.artifact_paths.push_back(p.string());
}

struct CheckLog {
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  bool all_pass = true;

  void add(const std::string& name, bool pass, const nlohmann::ordered_json& numbers) {
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << name << " " << numbers.dump() << "\n";
    results.push_back({{"check", name}, {"pass", pass}, {"values", numbers}});
  }
};

}  // namespace

int cmd_simulate(const SimulateOptions& opts, const std::vector<std::string>& argv) {
  io::RunManifest manifest = start_manifest("simulate", argv, opts.config);
  ScenarioSpec spec = opts.config.empty() ? ScenarioSpec{} : config::load_scenario(opts.config);
  if (opts.n) spec.n = *opts.n;
  if (opts.p) spec.p = *opts.p;
  if (opts.s) spec.s = *opts.s;
  if (opts.scenario) spec.scenario = scenario_from_string(*opts.scenario);
  if (opts.sigma2) spec.sigma2_true = *opts.sigma2;
  if (opts.seed) spec.seed = *opts.seed;
  spec.validate();

  PhaseTimer timer(manifest);
  const SimulatedData sim = timer.run("generate", [&] { return simulate(spec); });
  const fs::path out(opts.out);
  timer.run("write", [&] { io::write_dataset_bundle(out, sim.x, sim.y, sim.beta_true); });
  track(manifest, {out / "X.csv", out / "y.csv", out / "beta_true.csv"});
  manifest.seeds["data"] = spec.seed;
  io::write_manifest(out / "manifest.json", manifest);
  std::cout << "wrote n=" << spec.n << " p=" << spec.p << " s=" << spec.s << " ("
            << to_string(spec.scenario) << ") to " << out.string() << "\n";
  return kOk;
}

int cmd_fit(const FitOptions& opts, const std::vector<std::string>& argv) {
  if (opts.m < 1) {
    std::cerr << "usage error: --m must be a positive integer\n";
    return kUsage;
  }
  const fs::path out(opts.out);
  if (!opts.data.empty() && fs::exists(out) && fs::equivalent(out, fs::path(opts.data))) {
    throw ValidationError("--out must differ from --data: sketched outputs never share a directory with raw data");
  }
  io::RunManifest manifest = start_manifest("fit", argv);
  PhaseTimer timer(manifest);

  io::DatasetBundle raw = timer.run("load", [&] {
    if (!opts.data.empty()) return io::read_dataset_bundle(opts.data);
    io::RegressionTable t = io::split_response(io::read_csv(opts.csv), opts.response);
    io::DatasetBundle b;
    b.x = std::move(t.x);
    b.y = std::move(t.y);
    return b;
  });
  const auto n = static_cast<std::size_t>(raw.y.size());
  const auto m = static_cast<std::size_t>(opts.m);

  SamplerConfig cfg = sampler_config(opts.sampler);
  const std::uint64_t sketch_seed = derive_seed(opts.sampler.seed, {1});
  cfg.seed = derive_seed(opts.sampler.seed, {2});

  SketchedData data = timer.run("sketch", [&] {
    const SketchMatrix phi = generate_sketch_matrix(m, n, sketch_seed, opts.sketch_threads);
    return apply_sketch(phi, raw.y, raw.x);
  });
  const Matrix raw_x = std::move(raw.x);
  track(manifest, io::write_sketch_bundle(out / "sketch", data));

  const ChainOutput chain = timer.run("sample", [&] { return run_chain(data, cfg); });
  track(manifest, io::write_chain(out / "chain.csv", chain, cfg));

  timer.run("diagnostics", [&] {
    const EfficiencyReport eff = efficiency_report(chain.beta_draws, chain.wall_seconds);
    io::write_text(out / "efficiency.json", io::efficiency_json(eff));
    track(manifest, {out / "efficiency.json"});
    if (raw.beta_true) {
      const EstimationReport est = estimation_report(chain.beta_draws, *raw.beta_true, &raw_x);
      io::write_text(out / "estimation.json", io::estimation_json(est));
      io::write_estimation_csv(out / "estimation.csv", est, *raw.beta_true);
      track(manifest, {out / "estimation.json", out / "estimation.csv"});
      std::cout << "mse=" << est.mse << " mse_nz=" << (est.mse_nz ? *est.mse_nz : 0.0)
                << " coverage_nz=" << (est.coverage_nz ? *est.coverage_nz : 0.0) << "\n";
    }
    std::cout << "kept=" << chain.kept() << " per_iter_ms=" << chain.per_iter_seconds * 1e3
              << " ess_mean=" << eff.ess_mean << " clamp_events=" << chain.clamp_events << "\n";
  });

  manifest.seeds["master"] = opts.sampler.seed;
  manifest.seeds["sketch"] = sketch_seed;
  manifest.seeds["chain"] = cfg.seed;
  io::write_manifest(out / "manifest.json", manifest);
  return kOk;
}

int cmd_compare(const CompareOptions& opts, const std::vector<std::string>& argv) {
  io::RunManifest manifest = start_manifest("compare", argv);
  PhaseTimer timer(manifest);
  const io::DatasetBundle raw = timer.run("load", [&] { return io::read_dataset_bundle(opts.data); });
  std::vector<Method> methods;
  for (const auto& name : opts.methods) methods.push_back(method_from_string(name));
  if (methods.empty()) throw ValidationError("compare: no methods");
  if (opts.reps == 0) throw ValidationError("compare: --reps must be >= 1");
  for (std::size_t m : opts.m_grid) {
    if (m == 0) throw ValidationError("compare: m must be positive");
  }
  const SamplerConfig cfg = sampler_config(opts.sampler);
  const fs::path out(opts.out);
  std::optional<std::string> dump;
  if (opts.dump_chains) dump = (out / "chains").string();

  std::vector<CellResult> cells = timer.run("fit", [&] {
    std::vector<CellResult> all;
    for (std::size_t rep = 0; rep < opts.reps; ++rep) {
      auto c = compare_methods(raw.y, raw.x, raw.beta_true, opts.m_grid, methods, cfg,
                               opts.sampler.seed, rep, opts.bins, dump);
      all.insert(all.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
    }
    return all;
  });
  const auto rows = aggregate(cells);
  io::write_text(out / "table.csv", io::study_summary_csv(rows, true));
  io::write_text(out / "cells.csv", io::study_cells_csv(cells, true));
  track(manifest, {out / "table.csv", out / "cells.csv"});
  manifest.seeds["master"] = opts.sampler.seed;
  io::write_manifest(out / "manifest.json", manifest);

  std::size_t skipped = 0;
  for (const auto& r : rows) {
    skipped += r.skipped;
    std::cout << to_string(r.method) << " m=" << r.m << " accuracy="
              << (r.accuracy.count ? io::format_double(r.accuracy.mean) : "-")
              << " per_iter_ms=" << r.per_iter_seconds.mean * 1e3 << " ess=" << r.ess_mean.mean
              << (r.skipped ? " (skipped cells: " + std::to_string(r.skipped) + ")" : "") << "\n";
  }
  return skipped > 0 ? kPartial : kOk;
}

int cmd_study(const StudyOptions& opts, const std::vector<std::string>& argv) {
  io::RunManifest manifest = start_manifest("study", argv, opts.config);
  StudyConfig cfg = config::load_study_config(opts.config);
  if (opts.workers) cfg.workers = *opts.workers;
  const fs::path out(opts.out);
  if (opts.dump_chains) cfg.chain_dump_dir = (out / "chains").string();

  PhaseTimer timer(manifest);
  const StudyReport report = timer.run("study", [&] { return run_study(cfg); });
  io::write_text(out / "report.csv", io::study_cells_csv(report.per_cell, false));
  io::write_text(out / "summary.json", io::study_summary_json(report, cfg, false));
  io::write_text(out / "summary.csv", io::study_summary_csv(report.aggregates, false));
  // Wall-clock columns vary run to run, so they live in separate files.
  io::write_text(out / "timings.csv", io::study_cells_csv(report.per_cell, true));
  io::write_text(out / "summary_timings.csv", io::study_summary_csv(report.aggregates, true));
  track(manifest, {out / "report.csv", out / "summary.json", out / "summary.csv", out / "timings.csv",
                   out / "summary_timings.csv"});
  manifest.seeds["master"] = cfg.seed;
  io::write_manifest(out / "manifest.json", manifest);

  std::cout << report.per_cell.size() << " cells, " << report.skipped_cells() << " skipped\n";
  return report.skipped_cells() > 0 ? kPartial : kOk;
}

int cmd_verify(const VerifyOptions& opts, const std::vector<std::string>& argv) {
  if (opts.scale != "quick" && opts.scale != "full") {
    throw ValidationError("verify: --scale must be quick or full");
  }
  const bool full = opts.scale == "full";
  CheckLog log;

  {
    const std::size_t seeds = full ? 100 : 20;
    std::vector<double> devs;
    std::size_t passes = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const IsometryReport r = verify_isometry(
          generate_sketch_matrix(200, 2000, derive_seed(opts.seed, {10, s})), 0.05);
      passes += r.pass ? 1 : 0;
      devs.push_back(r.spectral_dev);
    }
    std::nth_element(devs.begin(), devs.begin() + static_cast<long>(devs.size() / 2), devs.end());
    const double median = devs[devs.size() / 2];
    const double rate = static_cast<double>(passes) / static_cast<double>(seeds);
    log.add("isometry_pass_rate", rate >= 0.95, {{"rate", rate}, {"seeds", seeds}});
    log.add("isometry_median_deviation", median <= 3.0 * std::sqrt(0.1),
            {{"median", median}, {"bound", 3.0 * std::sqrt(0.1)}});
    const IsometryReport scalar = verify_isometry(generate_sketch_matrix(1, 10000, opts.seed), 0.1);
    log.add("isometry_scalar", scalar.pass, {{"eig", scalar.min_eig}});
  }

  {
    const std::size_t p = 20, m = 10, draws = full ? 200000 : 20000;
    Rng rng(derive_seed(opts.seed, {20}));
    SketchedData data;
    data.x_tilde = Matrix::NullaryExpr(m, p, [&] { return rng.normal(); });
    data.y_tilde = Vector::NullaryExpr(m, [&] { return rng.normal(); });
    data.n = 2 * m;
    Vector delta = Vector::NullaryExpr(p, [&] { return 0.2 + rng.uniform(); });
    const double sigma = 0.8;
    const Matrix precision = Matrix(data.x_tilde.transpose() * data.x_tilde) +
                             Matrix(delta.cwiseInverse().asDiagonal());
    const Matrix cov = sigma * sigma * precision.inverse();
    const Vector mean = precision.inverse() * data.x_tilde.transpose() * data.y_tilde;

    FastBetaSampler fast(data);
    DirectBetaSampler direct(data);
    for (int which = 0; which < 2; ++which) {
      Vector sum = Vector::Zero(p);
      Matrix sq = Matrix::Zero(p, p);
      for (std::size_t i = 0; i < draws; ++i) {
        const Vector b = which == 0 ? fast.draw(delta, sigma, rng) : direct.draw(delta, sigma, rng);
        sum += b;
        sq.selfadjointView<Eigen::Lower>().rankUpdate(b);
      }
      const double k = static_cast<double>(draws);
      const Vector emp_mean = sum / k;
      const Matrix sq_full = sq.selfadjointView<Eigen::Lower>();
      const Matrix emp_cov = (sq_full - k * emp_mean * emp_mean.transpose()) / (k - 1.0);
      const double z = ((emp_mean - mean).array() / (cov.diagonal().array() / k).sqrt()).abs().maxCoeff();
      const double rel = (emp_cov - cov).norm() / cov.norm();
      const std::string name = which == 0 ? "sampler_fast_vs_closed_form" : "sampler_direct_vs_closed_form";
      log.add(name, z < 4.0 && rel < (full ? 0.05 : 0.1), {{"max_mean_z", z}, {"cov_rel_frobenius", rel}});
    }
  }

  {
    Rng rng(derive_seed(opts.seed, {30}));
    const Matrix a = Matrix::NullaryExpr(5000, 3, [&] { return rng.normal(); });
    const AccuracyReport same = hellinger_accuracy(a, a);
    log.add("hellinger_identical", (same.per_coeff.array() == 1.0).all(), {{"mean", same.mean_accuracy}});
    const Vector white = Vector::NullaryExpr(10000, [&] { return rng.normal(); });
    const double ess = effective_sample_size(white).ess;
    log.add("ess_white_noise", ess >= 8000 && ess <= 10000, {{"ess", ess}});
    const double eff = computational_efficiency(1024, 1);
    log.add("efficiency_power_of_two", eff == 10.0, {{"value", eff}});
  }

  {
    // Prior recovery: with no data the augmented chain must return half-Cauchy marginals.
    const std::size_t p = 2, thin = 10, keep = full ? 50000 : 10000;
    SketchedData empty;
    empty.x_tilde = Matrix::Zero(1, p);
    empty.y_tilde = Vector::Zero(1);
    empty.n = 2;
    FastBetaSampler prior(empty);
    Rng rng(derive_seed(opts.seed, {40}));
    HorseshoeState st = HorseshoeState::initial(p, 1.0);
    std::vector<double> lambda, tau;
    for (std::size_t it = 0; it < keep * thin + 1000; ++it) {
      st.beta = prior.draw(st.diag_delta(), 1.0, rng);
      update_local_scales(st, rng);
      update_global_scale(st, rng);
      if (it >= 1000 && (it - 1000) % thin == 0) {
        lambda.push_back(st.lambda[0]);
        tau.push_back(st.tau);
      }
    }
    auto half_cauchy = [](double x) { return 2.0 / std::numbers::pi * std::atan(x); };
    const double bound = full ? 0.02 : 0.03;
    const double ks_l = ks_distance(lambda, half_cauchy);
    const double ks_t = ks_distance(tau, half_cauchy);
    log.add("half_cauchy_prior_recovery", ks_l < bound && ks_t < bound,
            {{"ks_lambda", ks_l}, {"ks_tau", ks_t}, {"bound", bound}});
  }

  if (!opts.out.empty()) {
    nlohmann::ordered_json j;
    j["command"] = joined(argv);
    j["scale"] = opts.scale;
    j["seed"] = opts.seed;
    j["all_pass"] = log.all_pass;
    j["checks"] = log.results;
    io::write_text(opts.out, j.dump(2) + "\n");
  }
  std::cout << (log.all_pass ? "all checks passed" : "some checks FAILED") << "\n";
  return log.all_pass ? kOk : kNumerical;
}

}  // namespace sketchhs::cli
