#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "sketchhs/error.hpp"
#include "sketchhs/version.hpp"

namespace {

void add_sampler_flags(CLI::App* cmd, sketchhs::cli::SamplerFlags& f) {
  cmd->add_option("--iters", f.iters, "Total Gibbs iterations")->capture_default_str();
  cmd->add_option("--burn", f.burn, "Burn-in iterations")->capture_default_str();
  cmd->add_option("--thin", f.thin, "Thinning stride")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed; all randomness derives from it")->capture_default_str();
  cmd->add_option("--fixed-sigma", f.fixed_sigma, "Hold sigma^2 fixed at this value");
  cmd->add_option("--beta-method", f.beta_method, "fast | direct | auto")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sketchhs::cli;
  const std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"Sketched horseshoe regression: compress (y, X) with a Gaussian sketch and sample "
               "the horseshoe posterior in O(m^3 + m^2 p) per iteration."};
  app.set_version_flag("--version", std::string("sketchhs ") + sketchhs::kVersion);
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset bundle");
  simulate->add_option("--config", sim.config, "YAML file with a scenario section");
  simulate->add_option("--n", sim.n, "Sample size");
  simulate->add_option("--p", sim.p, "Feature count");
  simulate->add_option("--s", sim.s, "Number of nonzero coefficients");
  simulate->add_option("--scenario", sim.scenario, "1/independent or 2/compound");
  simulate->add_option("--sigma2", sim.sigma2, "Error variance");
  simulate->add_option("--seed", sim.seed, "Data seed");
  simulate->add_option("--out", sim.out, "Output directory")->required();

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Sketch a dataset and run the horseshoe sampler");
  auto* data_opt = fit_cmd->add_option("--data", fit.data, "Dataset bundle (X.csv, y.csv[, beta_true.csv])");
  auto* csv_opt = fit_cmd->add_option("--csv", fit.csv, "Raw CSV with response and feature columns");
  data_opt->excludes(csv_opt);
  fit_cmd->add_option("--response", fit.response, "Response column name or 0-based index (with --csv)")
      ->capture_default_str();
  fit_cmd->add_option("--m", fit.m, "Compressed row count (1 <= m < n)")->required();
  add_sampler_flags(fit_cmd, fit.sampler);
  fit_cmd->add_option("--sketch-threads", fit.sketch_threads, "Threads for sketch generation");
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Compare CHS / FullHS / SubsampleHS over an m grid");
  compare->add_option("--data", cmp.data, "Dataset bundle")->required();
  compare->add_option("--m-grid", cmp.m_grid, "Comma-separated m values")->delimiter(',')->required();
  compare->add_option("--methods", cmp.methods, "chs, full, subsample")->delimiter(',');
  add_sampler_flags(compare, cmp.sampler);
  compare->add_option("--reps", cmp.reps, "Independent sketch/chain replications")->capture_default_str();
  compare->add_option("--bins", cmp.bins, "Histogram bins for the Hellinger accuracy")->capture_default_str();
  compare->add_flag("--dump-chains", cmp.dump_chains, "Write every chain as CSV");
  compare->add_option("--out", cmp.out, "Output directory")->required();

  StudyOptions study;
  auto* study_cmd = app.add_subcommand("study", "Run a replicated simulation study from a config file");
  study_cmd->add_option("--config", study.config, "Study YAML")->required();
  study_cmd->add_option("--out", study.out, "Output directory")->required();
  study_cmd->add_option("--workers", study.workers, "Worker threads (0 = all cores)");
  study_cmd->add_flag("--dump-chains", study.dump_chains, "Write every chain as CSV");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Self-test of random-matrix, sampler and metric properties");
  verify->add_option("--scale", ver.scale, "quick | full")->capture_default_str();
  verify->add_option("--seed", ver.seed, "Seed for the checks")->capture_default_str();
  verify->add_option("--out", ver.out, "Optional JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, args);
    if (*fit_cmd) {
      if (fit.data.empty() == fit.csv.empty()) {
        std::cerr << "fit: exactly one of --data or --csv is required\n";
        return kUsage;
      }
      return cmd_fit(fit, args);
    }
    if (*compare) return cmd_compare(cmp, args);
    if (*study_cmd) return cmd_study(study, args);
    if (*verify) return cmd_verify(ver, args);
  } catch (const sketchhs::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sketchhs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
