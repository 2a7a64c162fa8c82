#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sketchhs {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent substream seed from a master seed and a key path.
///
/// Stream-splitting rule: the master seed is folded with each key in order,
/// `state = mix64(state ^ mix64(key + k_i))`, where k_i is a per-position
/// odd constant. Keys are small integers naming the consumer, e.g.
/// `{row}` for one row of a sketch matrix or `{replication, m, method}` for
/// one study cell. Distinct paths give statistically independent streams and
/// the result never depends on how work is scheduled across threads.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys) noexcept;

/// Seedable generator used everywhere randomness is needed.
///
/// Wraps std::mt19937_64; the distributions are the libstdc++ ones, so a
/// given seed reproduces bit-identical draws on the same toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double normal();
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Gamma with the given shape and unit scale.
  double gamma(double shape);
  /// Inverse-gamma with density proportional to x^{-shape-1} exp(-scale/x).
  double inv_gamma(double shape, double scale);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace sketchhs
