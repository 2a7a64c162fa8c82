#include "sketchhs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sketchhs/error.hpp"

namespace sketchhs {

AccuracyReport hellinger_accuracy(const Matrix& draws_a, const Matrix& draws_b,
                                  std::size_t bins) {
  if (draws_a.cols() != draws_b.cols()) {
    throw ValidationError("hellinger_accuracy: draw sets have different p");
  }
  if (static_cast<std::size_t>(draws_a.rows()) < kMinAccuracyDraws ||
      static_cast<std::size_t>(draws_b.rows()) < kMinAccuracyDraws) {
    throw ValidationError("hellinger_accuracy: at least 100 draws per set are required");
  }
  if (bins == 0) throw ValidationError("hellinger_accuracy: bins must be positive");
  if (!draws_a.allFinite() || !draws_b.allFinite()) {
    throw ValidationError("hellinger_accuracy: non-finite draws");
  }

  const Eigen::Index p = draws_a.cols();
  AccuracyReport report;
  report.grid_bins = bins;
  report.per_coeff.resize(p);
  report.support_lo.resize(p);
  report.support_hi.resize(p);

  const double norm = std::sqrt(static_cast<double>(draws_a.rows()) *
                                static_cast<double>(draws_b.rows()));
  std::vector<double> count_a(bins), count_b(bins);
  auto fill = [&](const auto& col, double lo, double span, std::vector<double>& counts) {
    std::fill(counts.begin(), counts.end(), 0.0);
    const double scale = static_cast<double>(bins) / span;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      auto idx = static_cast<std::size_t>(std::max(0.0, std::floor((col[i] - lo) * scale)));
      counts[std::min(idx, bins - 1)] += 1.0;
    }
  };

  for (Eigen::Index j = 0; j < p; ++j) {
    const auto a = draws_a.col(j);
    const auto b = draws_b.col(j);
    double lo = std::min(a.minCoeff(), b.minCoeff());
    double hi = std::max(a.maxCoeff(), b.maxCoeff());
    const double width = hi - lo;
    if (width == 0.0) {
      // Every draw in both sets is the same point.
      report.per_coeff[j] = 1.0;
      report.support_lo[j] = lo;
      report.support_hi[j] = hi;
      continue;
    }
    lo -= 0.01 * width;
    hi += 0.01 * width;
    report.support_lo[j] = lo;
    report.support_hi[j] = hi;
    fill(a, lo, hi - lo, count_a);
    fill(b, lo, hi - lo, count_b);
    double bc = 0.0;
    for (std::size_t i = 0; i < bins; ++i) bc += std::sqrt(count_a[i] * count_b[i]);
    report.per_coeff[j] = std::min(1.0, bc / norm);
  }
  report.mean_accuracy = p > 0 ? report.per_coeff.mean() : 1.0;
  return report;
}

EssResult effective_sample_size(const Eigen::Ref<const Vector>& chain) {
  const Eigen::Index k = chain.size();
  if (k < 10) throw ValidationError("effective_sample_size: need at least 10 draws");
  if (!chain.allFinite()) throw ValidationError("effective_sample_size: non-finite draws");
  const double kd = static_cast<double>(k);

  const Vector x = chain.array() - chain.mean();
  const double var0 = x.squaredNorm() / kd;
  if (var0 == 0.0 || (chain.array() == chain[0]).all()) return {kd, true};

  auto rho = [&](Eigen::Index t) {
    return x.head(k - t).dot(x.tail(k - t)) / kd / var0;
  };

  // Initial monotone positive sequence over pair sums Gamma_m = rho_2m + rho_2m+1.
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; 2 * m + 1 < k; ++m) {
    double gamma = (m == 0 ? 1.0 : rho(2 * m)) + rho(2 * m + 1);
    if (gamma <= 0.0) break;
    gamma = std::min(gamma, prev);
    sum += gamma;
    prev = gamma;
  }
  const double tau = 2.0 * sum - 1.0;
  const double ess = tau > 0.0 ? std::min(kd, kd / tau) : kd;
  return {ess, false};
}

double computational_efficiency(double ess_mean, double wall_hours) {
  if (!(ess_mean > 0.0) || !(wall_hours > 0.0)) {
    throw ValidationError("computational_efficiency: ess and wall time must be positive");
  }
  return std::log2(ess_mean) / wall_hours;
}

EfficiencyReport efficiency_report(const Matrix& draws, double wall_seconds) {
  EfficiencyReport r;
  double total = 0.0;
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    const EssResult e = effective_sample_size(draws.col(j));
    total += e.ess;
    if (e.constant_chain) ++r.constant_chains;
  }
  r.ess_mean = draws.cols() > 0 ? total / static_cast<double>(draws.cols()) : 0.0;
  r.wall_hours = wall_seconds / 3600.0;
  r.efficiency = computational_efficiency(r.ess_mean, r.wall_hours);
  return r;
}

double sorted_quantile(const double* sorted, std::size_t count, double prob) {
  if (count == 0) throw ValidationError("quantile of an empty sample");
  const double h = static_cast<double>(count - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= count) return sorted[count - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double k = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / k - f, f - static_cast<double>(i) / k});
  }
  return d;
}

EstimationReport estimation_report(const Matrix& beta_draws, const Vector& beta_true,
                                   const Matrix* x, double level) {
  const Eigen::Index k = beta_draws.rows();
  const Eigen::Index p = beta_draws.cols();
  if (k == 0) throw ValidationError("estimation_report: no draws");
  if (beta_true.size() != p) throw ValidationError("estimation_report: len(beta_true) != p");
  if (!beta_true.allFinite()) throw ValidationError("estimation_report: beta_true not finite");
  if (x != nullptr && x->cols() != p) throw ValidationError("estimation_report: cols(X) != p");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("estimation_report: level in (0,1)");

  EstimationReport r;
  r.beta_hat = beta_draws.colwise().mean().transpose();
  r.lower.resize(p);
  r.upper.resize(p);
  const double alpha = (1.0 - level) / 2.0;
  std::vector<double> col(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) col[static_cast<std::size_t>(i)] = beta_draws(i, j);
    std::sort(col.begin(), col.end());
    r.lower[j] = sorted_quantile(col.data(), col.size(), alpha);
    r.upper[j] = sorted_quantile(col.data(), col.size(), 1.0 - alpha);
  }

  const Vector err = r.beta_hat - beta_true;
  r.l2_error = err.norm();
  r.mse = p > 0 ? err.squaredNorm() / static_cast<double>(p) : 0.0;

  double cover_all = 0.0, len_all = 0.0, cover_nz = 0.0, len_nz = 0.0, sq_nz = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const bool covered = r.lower[j] <= beta_true[j] && beta_true[j] <= r.upper[j];
    const double len = r.upper[j] - r.lower[j];
    cover_all += covered ? 1.0 : 0.0;
    len_all += len;
    if (beta_true[j] != 0.0) {
      ++r.nonzero;
      cover_nz += covered ? 1.0 : 0.0;
      len_nz += len;
      sq_nz += err[j] * err[j];
    }
  }
  if (p > 0) {
    r.coverage_all = cover_all / static_cast<double>(p);
    r.length_all = len_all / static_cast<double>(p);
  }
  if (r.nonzero > 0) {
    const double s = static_cast<double>(r.nonzero);
    r.mse_nz = sq_nz / s;
    r.coverage_nz = cover_nz / s;
    r.length_nz = len_nz / s;
  }
  if (x != nullptr && x->rows() > 0) {
    r.mspe_proxy = (*x * err).squaredNorm() / static_cast<double>(x->rows());
  }
  return r;
}

}  // namespace sketchhs
