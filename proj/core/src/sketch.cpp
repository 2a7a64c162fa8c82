#include "sketchhs/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sketchhs/error.hpp"
#include "sketchhs/random.hpp"

namespace sketchhs {

namespace {

void hash_rows(Sha256& hash, const Eigen::Ref<const Vector>& y,
               const Eigen::Ref<const Matrix>& x, std::vector<double>& row) {
  const auto p = static_cast<std::size_t>(x.cols());
  row.resize(p + 1);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    row[0] = y[i];
    for (std::size_t j = 0; j < p; ++j) row[j + 1] = x(i, static_cast<Eigen::Index>(j));
    hash.update(std::span<const double>(row));
  }
}

}  // namespace

const char* to_string(SketchKind kind) noexcept {
  switch (kind) {
    case SketchKind::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

SketchMatrix SketchMatrix::from_entries_unchecked(RowMatrix entries, std::uint64_t seed) {
  if (!entries.allFinite()) throw ValidationError("sketch entries must be finite");
  return SketchMatrix(std::move(entries), seed, SketchKind::Gaussian);
}

void SketchedData::validate() const {
  if (static_cast<std::size_t>(x_tilde.rows()) != m()) {
    throw ValidationError("sketched data: len(y_tilde) != rows(x_tilde)");
  }
  if (!y_tilde.allFinite() || !x_tilde.allFinite()) {
    throw ValidationError("sketched data contains non-finite entries");
  }
}

SketchedData SketchedData::unsketched(const Vector& y, const Matrix& x) {
  if (y.size() != x.rows()) throw ValidationError("len(y) != rows(X)");
  SketchedData data;
  data.y_tilde = y;
  data.x_tilde = x;
  data.n = static_cast<std::size_t>(y.size());
  data.source_hash = source_digest(y, x);
  data.sketched = false;
  data.validate();
  return data;
}

SketchMatrix generate_sketch_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                                    unsigned threads) {
  if (m == 0 || n == 0) throw ValidationError("sketch dimensions must be positive");
  if (m >= n) throw ValidationError("sketch must strictly compress (m < n)");

  RowMatrix entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, {i}));
      double* row = entries.row(static_cast<Eigen::Index>(i)).data();
      for (std::size_t j = 0; j < n; ++j) row[j] = scale * rng.normal();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, m));
  if (threads <= 1) {
    fill_rows(0, m);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (m + threads - 1) / threads;
    for (std::size_t begin = 0; begin < m; begin += chunk) {
      pool.emplace_back(fill_rows, begin, std::min(m, begin + chunk));
    }
  }
  return SketchMatrix(std::move(entries), seed, SketchKind::Gaussian);
}

SketchAccumulator::SketchAccumulator(const SketchMatrix& phi, std::size_t p)
    : phi_(&phi),
      p_(p),
      y_tilde_(Vector::Zero(static_cast<Eigen::Index>(phi.rows()))),
      x_tilde_(Matrix::Zero(static_cast<Eigen::Index>(phi.rows()), static_cast<Eigen::Index>(p))) {}

void SketchAccumulator::add_rows(const Eigen::Ref<const Vector>& y_block,
                                 const Eigen::Ref<const Matrix>& x_block) {
  if (finished_) throw ValidationError("sketch accumulator already finished");
  const auto rows = static_cast<std::size_t>(y_block.size());
  if (static_cast<std::size_t>(x_block.rows()) != rows) {
    throw ValidationError("row block: len(y) != rows(X)");
  }
  if (static_cast<std::size_t>(x_block.cols()) != p_) {
    throw ValidationError("row block: feature count mismatch");
  }
  if (offset_ + rows > phi_->cols()) {
    throw ValidationError("more rows than the sketch has columns (phi.n)");
  }
  if (!y_block.allFinite() || !x_block.allFinite()) {
    throw ValidationError("raw data contains non-finite entries");
  }
  std::vector<double> row;
  hash_rows(hash_, y_block, x_block, row);

  const auto off = static_cast<Eigen::Index>(offset_);
  const auto cnt = static_cast<Eigen::Index>(rows);
  const auto phi_block = phi_->entries().middleCols(off, cnt);
  y_tilde_.noalias() += phi_block * y_block;
  x_tilde_.noalias() += phi_block * x_block;
  offset_ += rows;
}

SketchedData SketchAccumulator::finish() {
  if (finished_) throw ValidationError("sketch accumulator already finished");
  if (offset_ != phi_->cols()) {
    throw ValidationError("dimension mismatch: sketch expects n = " + std::to_string(phi_->cols()) +
                          " rows, got " + std::to_string(offset_));
  }
  finished_ = true;
  SketchedData out;
  out.y_tilde = std::move(y_tilde_);
  out.x_tilde = std::move(x_tilde_);
  out.n = phi_->cols();
  out.seed = phi_->seed();
  out.kind = phi_->kind();
  out.source_hash = hash_.hex();
  return out;
}

SketchedData apply_sketch(const SketchMatrix& phi, const Vector& y, const Matrix& x,
                          std::size_t block_rows) {
  if (static_cast<std::size_t>(y.size()) != phi.cols() ||
      static_cast<std::size_t>(x.rows()) != phi.cols()) {
    throw ValidationError("dimension mismatch: phi.n must equal len(y) and rows(X)");
  }
  if (block_rows == 0) throw ValidationError("block_rows must be positive");
  SketchAccumulator acc(phi, static_cast<std::size_t>(x.cols()));
  const auto n = static_cast<std::size_t>(y.size());
  for (std::size_t begin = 0; begin < n; begin += block_rows) {
    const auto len = static_cast<Eigen::Index>(std::min(block_rows, n - begin));
    const auto off = static_cast<Eigen::Index>(begin);
    acc.add_rows(y.segment(off, len), x.middleRows(off, len));
  }
  return acc.finish();
}

IsometryReport verify_isometry(const SketchMatrix& phi, double slack) {
  if (!(slack >= 0.0)) throw ValidationError("slack must be nonnegative");
  const auto& e = phi.entries();
  if (!e.allFinite()) throw NumericalError("verify_isometry: non-finite sketch entries");

  const Matrix gram = e * e.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("verify_isometry: eigendecomposition failed");
  }
  const Vector& eig = solver.eigenvalues();

  IsometryReport r;
  r.min_eig = std::max(0.0, eig.minCoeff());
  r.max_eig = std::max(r.min_eig, eig.maxCoeff());
  r.spectral_dev = (eig.array() - 1.0).abs().maxCoeff();
  const double ratio = std::sqrt(static_cast<double>(phi.rows()) / static_cast<double>(phi.cols()));
  r.bound_lower = (1.0 - ratio) * (1.0 - ratio);
  r.bound_upper = (1.0 + ratio) * (1.0 + ratio);
  r.slack = slack;
  r.pass = r.min_eig >= r.bound_lower - slack && r.max_eig <= r.bound_upper + slack;
  return r;
}

std::string source_digest(const Vector& y, const Matrix& x) {
  Sha256 hash;
  std::vector<double> row;
  hash_rows(hash, y, x, row);
  return hash.hex();
}

}  // namespace sketchhs
