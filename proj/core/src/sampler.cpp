#include "sketchhs/sampler.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "sketchhs/digest.hpp"
#include "sketchhs/error.hpp"

namespace sketchhs {

namespace {

double clamp_scale(double value, std::size_t& events, const char* what) {
  if (std::isnan(value)) throw NumericalError(std::string(what) + " draw is NaN");
  if (value < kScaleFloor) {
    ++events;
    return kScaleFloor;
  }
  if (value > kScaleCeiling) {
    ++events;
    return kScaleCeiling;
  }
  return value;
}

void check_delta(const Vector& diag_delta, std::size_t p, double sigma) {
  if (static_cast<std::size_t>(diag_delta.size()) != p) {
    throw ValidationError("diag_delta length must equal p");
  }
  if (!((diag_delta.array() > 0.0).all() && diag_delta.allFinite())) {
    throw ValidationError("diag_delta entries must be positive and finite");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("sigma must be positive and finite");
  }
}

Vector standard_normals(Eigen::Index k, Rng& rng) {
  Vector z(k);
  for (Eigen::Index i = 0; i < k; ++i) z[i] = rng.normal();
  return z;
}

}  // namespace

HorseshoeState HorseshoeState::initial(std::size_t p, double sigma2) {
  const auto k = static_cast<Eigen::Index>(p);
  HorseshoeState s;
  s.beta = Vector::Zero(k);
  s.lambda = Vector::Ones(k);
  s.nu = Vector::Ones(k);
  s.tau = 1.0;
  s.xi = 1.0;
  s.sigma2 = sigma2;
  return s;
}

void HorseshoeState::check() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (lambda.size() != beta.size() || nu.size() != beta.size()) {
    throw ValidationError("horseshoe state: beta, lambda, nu lengths differ");
  }
  if (!beta.allFinite()) throw NumericalError("horseshoe state: beta not finite");
  if (!((lambda.array() > 0.0).all() && lambda.allFinite()) ||
      !((nu.array() > 0.0).all() && nu.allFinite()) || !positive(tau) || !positive(xi) ||
      !positive(sigma2)) {
    throw NumericalError("horseshoe state: scale parameter outside (0, inf)");
  }
}

Vector HorseshoeState::diag_delta() const {
  const double tau2 = tau * tau;
  return (tau2 * lambda.array().square()).cwiseMax(kScaleFloor).cwiseMin(kScaleCeiling).matrix();
}

std::string HorseshoeState::digest() const {
  Sha256 h;
  h.update(std::span<const double>(beta.data(), static_cast<std::size_t>(beta.size())));
  h.update(std::span<const double>(lambda.data(), static_cast<std::size_t>(lambda.size())));
  h.update(std::span<const double>(nu.data(), static_cast<std::size_t>(nu.size())));
  const double scalars[] = {tau, xi, sigma2};
  h.update(std::span<const double>(scalars));
  return h.hex();
}

const char* to_string(BetaMethod method) noexcept {
  switch (method) {
    case BetaMethod::Fast:
      return "fast";
    case BetaMethod::Direct:
      return "direct";
    case BetaMethod::Auto:
      return "auto";
  }
  return "unknown";
}

BetaMethod beta_method_from_string(const std::string& name) {
  if (name == "fast") return BetaMethod::Fast;
  if (name == "direct") return BetaMethod::Direct;
  if (name == "auto") return BetaMethod::Auto;
  throw ValidationError("unknown beta method '" + name + "' (expected fast, direct or auto)");
}

void SamplerConfig::validate() const {
  if (n_iter == 0) throw ValidationError("n_iter must be positive");
  if (n_burn >= n_iter) throw ValidationError("n_burn must be smaller than n_iter");
  if (thin == 0) throw ValidationError("thin must be at least 1");
  if (fixed_sigma && !(*fixed_sigma > 0.0 && std::isfinite(*fixed_sigma))) {
    throw ValidationError("fixed_sigma must be positive and finite");
  }
}

ChainError::ChainError(const std::string& what, std::size_t iteration, std::string state_digest)
    : NumericalError("iteration " + std::to_string(iteration) + ": " + what +
                     " (state digest " + state_digest + ")"),
      iteration_(iteration),
      state_digest_(std::move(state_digest)) {}

FastBetaSampler::FastBetaSampler(const SketchedData& data) : data_(&data) {
  data.validate();
}

Vector FastBetaSampler::draw(const Vector& diag_delta, double sigma, Rng& rng) {
  const Vector z_p = standard_normals(data_->x_tilde.cols(), rng);
  const Vector z_m = standard_normals(data_->x_tilde.rows(), rng);
  return draw_from_normals(diag_delta, sigma, z_p, z_m);
}

Vector FastBetaSampler::draw_from_normals(const Vector& diag_delta, double sigma,
                                          const Vector& z_p, const Vector& z_m) {
  const Matrix& x = data_->x_tilde;
  const Vector& y = data_->y_tilde;
  const Eigen::Index m = x.rows();
  check_delta(diag_delta, data_->p(), sigma);
  if (z_p.size() != x.cols() || z_m.size() != m) {
    throw ValidationError("fast beta draw: normal vectors have the wrong length");
  }

  const Vector sd = diag_delta.cwiseSqrt();
  const Vector v1 = sigma * sd.cwiseProduct(z_p);
  const Vector v3 = x * v1 / sigma + z_m;

  // X~ Delta X~' + I_m through the column-scaled copy; O(m^2 p).
  scaled_.noalias() = x * sd.asDiagonal();
  gram_.setIdentity(m, m);
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(scaled_);
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("fast beta draw: Cholesky of X Delta X' + I failed (non-finite input?)");
  }
  const Vector v4 = llt_.solve(y / sigma - v3);
  return v1 + sigma * diag_delta.cwiseProduct(x.transpose() * v4);
}

DirectBetaSampler::DirectBetaSampler(const SketchedData& data) {
  data.validate();
  const std::size_t p = data.p();
  if (p > kDirectMaxFeatures) {
    throw ValidationError("direct sampler refuses p = " + std::to_string(p) + " > " +
                          std::to_string(kDirectMaxFeatures));
  }
  const auto k = static_cast<Eigen::Index>(p);
  xtx_ = Matrix::Zero(k, k);
  xtx_.selfadjointView<Eigen::Lower>().rankUpdate(data.x_tilde.transpose());
  xty_ = data.x_tilde.transpose() * data.y_tilde;
}

Vector DirectBetaSampler::draw(const Vector& diag_delta, double sigma, Rng& rng) {
  return draw_from_normals(diag_delta, sigma, standard_normals(xty_.size(), rng));
}

Vector DirectBetaSampler::draw_from_normals(const Vector& diag_delta, double sigma,
                                            const Vector& z_p) {
  check_delta(diag_delta, static_cast<std::size_t>(xty_.size()), sigma);
  if (z_p.size() != xty_.size()) {
    throw ValidationError("direct beta draw: normal vector has the wrong length");
  }
  precision_ = xtx_;
  precision_.diagonal() += diag_delta.cwiseInverse();
  llt_.compute(precision_);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("direct beta draw: Cholesky of X'X + Delta^-1 failed");
  }
  const Vector mean = llt_.solve(xty_);
  const Vector noise = llt_.matrixU().solve(z_p);
  return mean + sigma * noise;
}

Vector sample_beta_fast(const SketchedData& data, const Vector& diag_delta, double sigma,
                        Rng& rng) {
  FastBetaSampler sampler(data);
  return sampler.draw(diag_delta, sigma, rng);
}

Vector sample_beta_direct(const SketchedData& data, const Vector& diag_delta, double sigma,
                          Rng& rng) {
  DirectBetaSampler sampler(data);
  return sampler.draw(diag_delta, sigma, rng);
}

std::size_t update_local_scales(HorseshoeState& state, Rng& rng) {
  state.check();
  std::size_t events = 0;
  const double denom = 2.0 * state.sigma2 * state.tau * state.tau;
  for (Eigen::Index j = 0; j < state.beta.size(); ++j) {
    const double b = state.beta[j];
    const double lambda2 =
        clamp_scale(rng.inv_gamma(1.0, 1.0 / state.nu[j] + b * b / denom), events, "lambda^2");
    state.lambda[j] = std::sqrt(lambda2);
    state.nu[j] = clamp_scale(rng.inv_gamma(1.0, 1.0 + 1.0 / lambda2), events, "nu");
  }
  return events;
}

std::size_t update_global_scale(HorseshoeState& state, Rng& rng) {
  state.check();
  std::size_t events = 0;
  const double p = static_cast<double>(state.p());
  const double weighted =
      (state.beta.array().square() / state.lambda.array().square()).sum() / (2.0 * state.sigma2);
  const double tau2 =
      clamp_scale(rng.inv_gamma((p + 1.0) / 2.0, 1.0 / state.xi + weighted), events, "tau^2");
  state.tau = std::sqrt(tau2);
  state.xi = clamp_scale(rng.inv_gamma(1.0, 1.0 + 1.0 / tau2), events, "xi");
  return events;
}

InvGammaParams sigma2_conditional(const SketchedData& data, const HorseshoeState& state) {
  if (static_cast<std::size_t>(state.beta.size()) != data.p()) {
    throw ValidationError("state dimension does not match data");
  }
  const double rss = (data.y_tilde - data.x_tilde * state.beta).squaredNorm();
  const double prior =
      (state.beta.array().square() / state.lambda.array().square()).sum() / (state.tau * state.tau);
  return {static_cast<double>(data.m() + data.p()) / 2.0, (rss + prior) / 2.0};
}

std::size_t update_sigma(const SketchedData& data, HorseshoeState& state, Rng& rng) {
  state.check();
  const InvGammaParams ig = sigma2_conditional(data, state);
  if (!(ig.shape > 0.0) || !(ig.scale > 0.0) || !std::isfinite(ig.scale)) {
    throw NumericalError("sigma^2 conditional is degenerate (shape " + std::to_string(ig.shape) +
                         ", scale " + std::to_string(ig.scale) + ")");
  }
  std::size_t events = 0;
  state.sigma2 = clamp_scale(rng.inv_gamma(ig.shape, ig.scale), events, "sigma^2");
  return events;
}

BetaMethod resolve_beta_method(BetaMethod requested, std::size_t m, std::size_t p) {
  if (requested == BetaMethod::Direct && p > kDirectMaxFeatures) {
    throw ValidationError("direct sampler requested with p = " + std::to_string(p) + " > " +
                          std::to_string(kDirectMaxFeatures));
  }
  if (requested != BetaMethod::Auto) return requested;
  if (p > kDirectMaxFeatures) return BetaMethod::Fast;
  const double md = static_cast<double>(m);
  const double pd = static_cast<double>(p);
  const double direct_flops = pd * pd * pd / 3.0;
  const double fast_flops = md * md * pd / 2.0 + md * md * md / 3.0;
  return direct_flops < fast_flops ? BetaMethod::Direct : BetaMethod::Fast;
}

ChainOutput run_chain(const SketchedData& data, const SamplerConfig& config) {
  config.validate();
  data.validate();
  const std::size_t p = data.p();
  const std::size_t m = data.m();
  if (m == 0) throw ValidationError("run_chain: no observations");

  double sigma2_init = 1.0;
  if (config.fixed_sigma) {
    sigma2_init = *config.fixed_sigma;
  } else if (m >= 2) {
    const double mean = data.y_tilde.mean();
    const double var = (data.y_tilde.array() - mean).square().sum() / static_cast<double>(m - 1);
    if (var > 0.0 && std::isfinite(var)) sigma2_init = var;
  }
  HorseshoeState state = config.initial_state ? *config.initial_state
                                              : HorseshoeState::initial(p, sigma2_init);
  if (state.p() != p) throw ValidationError("initial state dimension does not match data");
  if (config.fixed_sigma) state.sigma2 = *config.fixed_sigma;
  state.check();

  ChainOutput out;
  out.seed = config.seed;
  out.beta_method = resolve_beta_method(config.beta_method, m, p);
  const std::size_t kept = config.kept();
  out.beta_draws.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(p));
  out.tau_draws.resize(static_cast<Eigen::Index>(kept));
  out.sigma2_draws.resize(static_cast<Eigen::Index>(kept));

  std::optional<FastBetaSampler> fast;
  std::optional<DirectBetaSampler> direct;
  if (out.beta_method == BetaMethod::Fast) {
    fast.emplace(data);
  } else {
    direct.emplace(data);
  }

  Rng rng(config.seed);
  std::size_t row = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t it = 0; it < config.n_iter; ++it) {
    try {
      const Vector delta = state.diag_delta();
      const double sigma = std::sqrt(state.sigma2);
      state.beta = fast ? fast->draw(delta, sigma, rng) : direct->draw(delta, sigma, rng);
      if (config.update_local) out.clamp_events += update_local_scales(state, rng);
      if (!config.fixed_sigma) out.clamp_events += update_sigma(data, state, rng);
      if (config.update_global) out.clamp_events += update_global_scale(state, rng);
      state.check();
    } catch (const NumericalError& e) {
      throw ChainError(e.what(), it, state.digest());
    }
    if (it >= config.n_burn && (it - config.n_burn + 1) % config.thin == 0) {
      const auto r = static_cast<Eigen::Index>(row++);
      out.beta_draws.row(r) = state.beta.transpose();
      out.tau_draws[r] = state.tau;
      out.sigma2_draws[r] = state.sigma2;
    }
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  out.wall_seconds = std::max(elapsed.count(), 1e-9);
  out.per_iter_seconds = out.wall_seconds / static_cast<double>(config.n_iter);
  out.final_state = std::move(state);
  return out;
}

}  // namespace sketchhs
