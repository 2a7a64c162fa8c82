#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "sketchhs/digest.hpp"
#include "sketchhs/linalg.hpp"

namespace sketchhs {

/// Sketch families. Only the dense Gaussian sketch exists today.
enum class SketchKind { Gaussian };

const char* to_string(SketchKind kind) noexcept;

/// The m x n compression operator. Entries are i.i.d. N(0, 1/n); row i is
/// drawn from the substream `derive_seed(seed, {i})`, so the matrix is a pure
/// function of (m, n, seed) regardless of how many threads produce it.
class SketchMatrix {
 public:
  std::size_t rows() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
  std::uint64_t seed() const noexcept { return seed_; }
  SketchKind kind() const noexcept { return kind_; }
  const RowMatrix& entries() const noexcept { return entries_; }

  /// Test hook: wraps arbitrary finite entries without the m < n check, so
  /// identity or zero operators can be pushed through the pipeline.
  static SketchMatrix from_entries_unchecked(RowMatrix entries, std::uint64_t seed = 0);

 private:
  friend SketchMatrix generate_sketch_matrix(std::size_t, std::size_t, std::uint64_t, unsigned);
  SketchMatrix(RowMatrix entries, std::uint64_t seed, SketchKind kind)
      : entries_(std::move(entries)), seed_(seed), kind_(kind) {}

  RowMatrix entries_;
  std::uint64_t seed_ = 0;
  SketchKind kind_ = SketchKind::Gaussian;
};

/// Compressed observations (y~, X~). The raw inputs are never retained;
/// `source_hash` is a SHA-256 over the raw rows (y_i followed by x_i').
struct SketchedData {
  Vector y_tilde;
  Matrix x_tilde;
  std::size_t n = 0;  ///< original sample size
  std::uint64_t seed = 0;
  std::string source_hash;
  SketchKind kind = SketchKind::Gaussian;
  bool sketched = true;  ///< false for uncompressed data wrapped for the sampler

  std::size_t m() const noexcept { return static_cast<std::size_t>(y_tilde.size()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(x_tilde.cols()); }

  /// Throws ValidationError on inconsistent dimensions or non-finite entries.
  void validate() const;

  /// Wraps uncompressed (y, X) so full-data fits go through the same sampler.
  static SketchedData unsketched(const Vector& y, const Matrix& x);
};

/// Spectral summary of Phi Phi' against the almost-sure eigenvalue interval
/// ((sqrt(n) -/+ sqrt(m)) / sqrt(n))^2 for Gaussian sketches.
struct IsometryReport {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double spectral_dev = 0.0;  ///< ||Phi Phi' - I_m||_2
  double bound_lower = 0.0;
  double bound_upper = 0.0;
  double slack = 0.0;
  bool pass = false;
};

/// Draws an m x n Gaussian sketch. `threads` = 0 picks hardware concurrency.
/// Throws ValidationError unless 1 <= m < n.
SketchMatrix generate_sketch_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                                    unsigned threads = 1);

/// Accumulates Phi y and Phi X from consecutive row blocks of the raw data,
/// so peak memory is O(m p + block p) and the raw rows can be dropped as soon
/// as they are consumed.
class SketchAccumulator {
 public:
  SketchAccumulator(const SketchMatrix& phi, std::size_t p);

  /// Adds rows [rows_seen(), rows_seen() + y_block.size()).
  void add_rows(const Eigen::Ref<const Vector>& y_block,
                const Eigen::Ref<const Matrix>& x_block);

  std::size_t rows_seen() const noexcept { return offset_; }

  /// Requires every one of the n rows to have been added exactly once.
  SketchedData finish();

 private:
  const SketchMatrix* phi_;
  std::size_t p_;
  std::size_t offset_ = 0;
  Vector y_tilde_;
  Matrix x_tilde_;
  Sha256 hash_;
  bool finished_ = false;
};

inline constexpr std::size_t kDefaultSketchBlockRows = 4096;

/// y~ = Phi y, X~ = Phi X, streamed over row blocks of X. O(m n p).
SketchedData apply_sketch(const SketchMatrix& phi, const Vector& y, const Matrix& x,
                          std::size_t block_rows = kDefaultSketchBlockRows);

/// Eigenvalues of Phi Phi' via a full symmetric eigendecomposition of the
/// m x m Gram matrix. pass is true iff all eigenvalues lie in
/// [bound_lower - slack, bound_upper + slack].
IsometryReport verify_isometry(const SketchMatrix& phi, double slack);

/// SHA-256 over the raw rows in the same layout SketchAccumulator hashes.
std::string source_digest(const Vector& y, const Matrix& x);

}  // namespace sketchhs
