#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "sketchhs/linalg.hpp"

namespace sketchhs {

inline constexpr std::size_t kDefaultHellingerBins = 512;
inline constexpr std::size_t kMinAccuracyDraws = 100;

/// Per-coefficient 1 - H^2 between two sets of marginal posterior draws.
struct AccuracyReport {
  Vector per_coeff;
  double mean_accuracy = 0.0;
  std::size_t grid_bins = 0;
  Vector support_lo;
  Vector support_hi;
};

struct EssResult {
  double ess = 0.0;
  bool constant_chain = false;  ///< zero variance; ess set to the chain length
};

struct EfficiencyReport {
  double ess_mean = 0.0;
  double wall_hours = 0.0;
  double efficiency = 0.0;  ///< log2(ess_mean) / wall_hours
  std::size_t constant_chains = 0;
};

struct EstimationReport {
  double mse = 0.0;
  std::optional<double> mse_nz;
  double l2_error = 0.0;  ///< ||beta_hat - beta*||_2
  std::optional<double> mspe_proxy;
  double coverage_all = 0.0;
  std::optional<double> coverage_nz;
  double length_all = 0.0;
  std::optional<double> length_nz;
  std::size_t nonzero = 0;
  Vector beta_hat;
  Vector lower;
  Vector upper;
};

/// Binned Bhattacharyya coefficient sum_i sqrt(p_i q_i) per coefficient.
///
/// Both draw sets are histogrammed on a common grid spanning the pooled
/// range, padded by 1% on each side. The result is symmetric in its
/// arguments bit-for-bit. Requires at least 100 draws in each set.
AccuracyReport hellinger_accuracy(const Matrix& draws_a, const Matrix& draws_b,
                                  std::size_t bins = kDefaultHellingerBins);

/// ESS = k / (1 + 2 sum_t rho_t), with the autocorrelation sum truncated by
/// Geyer's initial monotone positive sequence. Clipped to (0, k].
EssResult effective_sample_size(const Eigen::Ref<const Vector>& chain);

/// log2(ess_mean) / wall_hours.
double computational_efficiency(double ess_mean, double wall_hours);

/// ESS averaged over the columns of `draws`, combined with the chain wall time.
EfficiencyReport efficiency_report(const Matrix& draws, double wall_seconds);

/// Point estimate (posterior mean), MSE variants and equal-tailed credible
/// interval coverage / length. `x`, when given, enables the MSPE proxy
/// ||X beta_hat - X beta*||^2 / n.
EstimationReport estimation_report(const Matrix& beta_draws, const Vector& beta_true,
                                   const Matrix* x = nullptr, double level = 0.95);

/// Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)| of a sample against a CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Type-7 (linear interpolation) sample quantile of an already sorted range.
double sorted_quantile(const double* sorted, std::size_t count, double prob);

}  // namespace sketchhs
