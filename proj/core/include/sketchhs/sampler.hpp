#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Cholesky>

#include "sketchhs/error.hpp"
#include "sketchhs/linalg.hpp"
#include "sketchhs/random.hpp"
#include "sketchhs/sketch.hpp"

namespace sketchhs {

/// Lower and upper clamp applied to lambda_j^2, tau^2 and sigma^2 after each draw.
inline constexpr double kScaleFloor = 1e-300;
inline constexpr double kScaleCeiling = 1e300;

/// Largest p for which the p x p direct sampler is allowed.
inline constexpr std::size_t kDirectMaxFeatures = 2000;

/// Horseshoe sampler state at one Gibbs iteration.
///
/// beta_j | lambda_j, tau, sigma ~ N(0, sigma^2 tau^2 lambda_j^2), with
/// half-Cauchy lambda_j and tau represented through inverse-gamma auxiliaries
/// nu_j and xi. Delta = tau^2 diag(lambda^2) is never materialized.
struct HorseshoeState {
  Vector beta;
  Vector lambda;  ///< local scales lambda_j (not squared)
  Vector nu;
  double tau = 1.0;
  double xi = 1.0;
  double sigma2 = 1.0;

  std::size_t p() const noexcept { return static_cast<std::size_t>(beta.size()); }

  /// beta = 0, lambda = nu = 1, tau = xi = 1.
  static HorseshoeState initial(std::size_t p, double sigma2);

  /// Throws NumericalError unless all scales are positive and finite and beta is finite.
  void check() const;

  /// Diagonal of Delta, clamped into [kScaleFloor, kScaleCeiling].
  Vector diag_delta() const;

  /// SHA-256 over the raw state bytes; attached to chain failures.
  std::string digest() const;
};

enum class BetaMethod {
  Fast,    ///< O(m^3 + m^2 p) m x m solve
  Direct,  ///< O(p^3) Cholesky of X'X + Delta^{-1}
  Auto,    ///< whichever is cheaper for the data shape
};

const char* to_string(BetaMethod method) noexcept;
BetaMethod beta_method_from_string(const std::string& name);

struct SamplerConfig {
  std::size_t n_iter = 10000;
  std::size_t n_burn = 5000;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  /// When set, sigma^2 is held at this value and never updated.
  std::optional<double> fixed_sigma;
  BetaMethod beta_method = BetaMethod::Fast;

  // Test hooks: disable the local / global scale blocks.
  bool update_local = true;
  bool update_global = true;
  std::optional<HorseshoeState> initial_state;

  std::size_t kept() const noexcept { return n_iter > n_burn ? (n_iter - n_burn) / thin : 0; }
  void validate() const;
};

struct ChainOutput {
  Matrix beta_draws;  ///< kept x p
  Vector tau_draws;
  Vector sigma2_draws;
  double wall_seconds = 0.0;
  double per_iter_seconds = 0.0;
  std::uint64_t seed = 0;
  std::size_t clamp_events = 0;
  BetaMethod beta_method = BetaMethod::Fast;
  HorseshoeState final_state;

  std::size_t kept() const noexcept { return static_cast<std::size_t>(beta_draws.rows()); }
};

/// Run-chain failure carrying the iteration and a digest of the state
/// snapshot taken just before the failing update.
class ChainError : public NumericalError {
 public:
  ChainError(const std::string& what, std::size_t iteration, std::string state_digest);
  std::size_t iteration() const noexcept { return iteration_; }
  const std::string& state_digest() const noexcept { return state_digest_; }

 private:
  std::size_t iteration_;
  std::string state_digest_;
};

/// Draws beta from N(A^{-1} X~'y~, sigma^2 A^{-1}), A = X~'X~ + Delta^{-1},
/// without forming any p x p matrix:
///
///   v1 ~ N(0, sigma^2 Delta), v2 ~ N(0, I_m)
///   v3 = X~ v1 / sigma + v2
///   (X~ Delta X~' + I_m) v4 = y~/sigma - v3        (Cholesky, m x m)
///   v5 = v1 + sigma Delta X~' v4
///
/// The workspace (m x p scaled copy of X~ plus the m x m factor) is reused
/// across draws, so one instance per chain keeps the allocation count flat.
class FastBetaSampler {
 public:
  explicit FastBetaSampler(const SketchedData& data);

  Vector draw(const Vector& diag_delta, double sigma, Rng& rng);

  /// Same map with the standard normals supplied (p for v1, m for v2).
  /// The draw is affine in (z_p, z_m), which lets tests recover the exact
  /// mean and covariance.
  Vector draw_from_normals(const Vector& diag_delta, double sigma, const Vector& z_p,
                           const Vector& z_m);

 private:
  const SketchedData* data_;
  Matrix scaled_;  ///< X~ diag(sqrt(delta))
  Matrix gram_;
  Eigen::LLT<Matrix> llt_;
};

/// Reference sampler: forms A = X~'X~ + Delta^{-1} (p x p), factorizes it and
/// returns mean + sigma L^{-T} z. X~'X~ and X~'y~ are cached at construction.
class DirectBetaSampler {
 public:
  explicit DirectBetaSampler(const SketchedData& data);

  Vector draw(const Vector& diag_delta, double sigma, Rng& rng);
  Vector draw_from_normals(const Vector& diag_delta, double sigma, const Vector& z_p);

 private:
  Matrix xtx_;
  Vector xty_;
  Matrix precision_;
  Eigen::LLT<Matrix> llt_;
};

Vector sample_beta_fast(const SketchedData& data, const Vector& diag_delta, double sigma,
                        Rng& rng);
Vector sample_beta_direct(const SketchedData& data, const Vector& diag_delta, double sigma,
                          Rng& rng);

/// Shape and scale of an inverse-gamma conditional.
struct InvGammaParams {
  double shape = 0.0;
  double scale = 0.0;
};

/// lambda_j^2 | nu_j, beta_j ~ IG(1, 1/nu_j + beta_j^2 / (2 sigma^2 tau^2)),
/// nu_j | lambda_j ~ IG(1, 1 + 1/lambda_j^2), for every j.
/// Returns the number of clamped draws.
std::size_t update_local_scales(HorseshoeState& state, Rng& rng);

/// tau^2 | xi, beta, lambda, sigma ~ IG((p+1)/2, 1/xi + sum beta_j^2/(2 sigma^2 lambda_j^2)),
/// xi | tau ~ IG(1, 1 + 1/tau^2). Returns the number of clamped draws.
std::size_t update_global_scale(HorseshoeState& state, Rng& rng);

/// sigma^2 conditional under the Jeffreys prior 1/sigma^2:
/// IG((m+p)/2, (||y~ - X~ beta||^2 + sum beta_j^2/(tau^2 lambda_j^2)) / 2).
InvGammaParams sigma2_conditional(const SketchedData& data, const HorseshoeState& state);

/// Draws sigma^2 from sigma2_conditional. Throws NumericalError when the
/// shape or scale is zero. Returns the number of clamped draws.
std::size_t update_sigma(const SketchedData& data, HorseshoeState& state, Rng& rng);

/// Blocked Gibbs sampler: (a) beta, (b) lambda/nu, (c) sigma^2, (d) tau/xi.
ChainOutput run_chain(const SketchedData& data, const SamplerConfig& config);

/// Method actually used by run_chain for the given data and request.
BetaMethod resolve_beta_method(BetaMethod requested, std::size_t m, std::size_t p);

}  // namespace sketchhs
