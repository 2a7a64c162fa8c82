#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sketchhs/error.hpp"
#include "sketchhs/sketch.hpp"

using namespace sketchhs;

namespace {

struct Raw {
  Vector y;
  Matrix x;
};

Raw raw_data(Eigen::Index n, Eigen::Index p, unsigned seed) {
  return {oracle::iid_normal(n, 1, 0.0, 1.0, seed).col(0),
          oracle::iid_normal(n, p, 0.0, 1.0, seed + 1)};
}

}  // namespace

TEST_SUITE("sketch") {

TEST_CASE("generate_sketch_matrix rejects non-compressing shapes") {
  CHECK_THROWS_WITH_AS(generate_sketch_matrix(1, 1, 0), doctest::Contains("strictly compress"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(generate_sketch_matrix(5, 3, 0), doctest::Contains("strictly compress"),
                       ValidationError);
  CHECK_THROWS_AS(generate_sketch_matrix(0, 10, 0), ValidationError);
  CHECK_THROWS_AS(generate_sketch_matrix(3, 0, 0), ValidationError);
}

TEST_CASE("entries match N(0, 1/n) moments") {
  const std::size_t m = 200, n = 2000;
  const SketchMatrix phi = generate_sketch_matrix(m, n, 7);
  CHECK(phi.rows() == m);
  CHECK(phi.cols() == n);
  const auto& e = phi.entries();
  const double count = static_cast<double>(e.size());
  const double mean = e.sum() / count;
  const double var = (e.array() - mean).square().sum() / (count - 1.0);
  const double nd = static_cast<double>(n);
  CHECK(std::abs(mean) < 4.0 / std::sqrt(nd * static_cast<double>(m) * nd));
  CHECK(var == doctest::Approx(1.0 / nd).epsilon(0.05));
}

TEST_CASE("generation is bit-reproducible and independent of thread count") {
  const SketchMatrix a = generate_sketch_matrix(200, 2000, 7);
  const SketchMatrix b = generate_sketch_matrix(200, 2000, 7);
  const SketchMatrix c = generate_sketch_matrix(200, 2000, 7, 4);
  const SketchMatrix d = generate_sketch_matrix(200, 2000, 8);
  CHECK(a.entries() == b.entries());
  CHECK(a.entries() == c.entries());
  CHECK(a.entries() != d.entries());
  // Row i is its own substream: a shorter matrix is a prefix of a taller one.
  const SketchMatrix tall = generate_sketch_matrix(300, 2000, 7);
  CHECK(tall.entries().topRows(200) == a.entries());
}

TEST_CASE("identity sketch reproduces the data exactly") {
  const Raw raw = raw_data(40, 6, 11);
  const SketchMatrix id = SketchMatrix::from_entries_unchecked(RowMatrix::Identity(40, 40));
  for (std::size_t block : {1u, 7u, 4096u}) {
    const SketchedData s = apply_sketch(id, raw.y, raw.x, block);
    CHECK(s.y_tilde == raw.y);
    CHECK(s.x_tilde == raw.x);
  }
}

TEST_CASE("zero response sketches to zero") {
  const Raw raw = raw_data(100, 5, 3);
  const SketchMatrix phi = generate_sketch_matrix(10, 100, 1);
  const SketchedData s = apply_sketch(phi, Vector::Zero(100), raw.x);
  CHECK(s.y_tilde == Vector::Zero(10));
}

TEST_CASE("apply_sketch agrees with a naive triple-loop product") {
  const Raw raw = raw_data(50, 8, 21);
  const SketchMatrix phi = generate_sketch_matrix(10, 50, 99);
  const Matrix dense_phi = phi.entries();
  const SketchedData s = apply_sketch(phi, raw.y, raw.x);
  CHECK(oracle::max_rel_diff(s.x_tilde, oracle::naive_product(dense_phi, raw.x)) < 1e-12);
  CHECK(oracle::max_rel_diff(s.y_tilde, oracle::naive_product(dense_phi, raw.y)) < 1e-12);
  CHECK(s.m() == 10);
  CHECK(s.p() == 8);
  CHECK(s.n == 50);
  CHECK(s.seed == 99);
  CHECK(s.source_hash == source_digest(raw.y, raw.x));
}

TEST_CASE("streaming blocks equal the one-shot dense product") {
  const Raw raw = raw_data(257, 12, 5);
  const SketchMatrix phi = generate_sketch_matrix(30, 257, 4);
  const Matrix dense_x = Matrix(phi.entries()) * raw.x;
  const Vector dense_y = Matrix(phi.entries()) * raw.y;
  for (std::size_t block : {1u, 2u, 17u, 64u, 256u, 257u, 10000u}) {
    CAPTURE(block);
    const SketchedData s = apply_sketch(phi, raw.y, raw.x, block);
    CHECK(oracle::max_rel_diff(s.x_tilde, dense_x) < 1e-12);
    CHECK(oracle::max_rel_diff(s.y_tilde, dense_y) < 1e-12);
  }
}

TEST_CASE("sketching is linear in y") {
  const Raw r1 = raw_data(120, 4, 8);
  const Raw r2 = raw_data(120, 4, 9);
  const SketchMatrix phi = generate_sketch_matrix(15, 120, 2);
  const double a = 1.7, b = -0.3;
  const Vector lhs = apply_sketch(phi, a * r1.y + b * r2.y, r1.x).y_tilde;
  const Vector rhs =
      a * apply_sketch(phi, r1.y, r1.x).y_tilde + b * apply_sketch(phi, r2.y, r1.x).y_tilde;
  CHECK(oracle::max_rel_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("sketched digests are deterministic") {
  const Raw raw = raw_data(300, 5, 1);
  const SketchedData a = apply_sketch(generate_sketch_matrix(20, 300, 3), raw.y, raw.x);
  const SketchedData b = apply_sketch(generate_sketch_matrix(20, 300, 3), raw.y, raw.x);
  const SketchedData c = apply_sketch(generate_sketch_matrix(20, 300, 3), raw.y, raw.x, 13);
  CHECK(a.source_hash == b.source_hash);
  CHECK(a.source_hash == c.source_hash);
  CHECK(a.y_tilde == b.y_tilde);
  CHECK(a.x_tilde == b.x_tilde);
  Raw other = raw;
  other.x(0, 0) += 1.0;
  CHECK(source_digest(other.y, other.x) != a.source_hash);
}

TEST_CASE("apply_sketch rejects bad inputs") {
  const Raw raw = raw_data(100, 3, 2);
  const SketchMatrix phi = generate_sketch_matrix(10, 100, 1);
  CHECK_THROWS_AS(apply_sketch(phi, raw.y.head(99), raw.x), ValidationError);
  CHECK_THROWS_AS(apply_sketch(phi, raw.y.head(99), raw.x.topRows(99)), ValidationError);
  Raw bad = raw;
  bad.x(5, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(apply_sketch(phi, bad.y, bad.x), ValidationError);
  bad = raw;
  bad.y[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(apply_sketch(phi, bad.y, bad.x), ValidationError);
  CHECK_THROWS_AS(apply_sketch(phi, raw.y, raw.x, 0), ValidationError);
}

TEST_CASE("accumulator requires every row exactly once") {
  const Raw raw = raw_data(100, 3, 2);
  const SketchMatrix phi = generate_sketch_matrix(10, 100, 1);
  SketchAccumulator acc(phi, 3);
  acc.add_rows(raw.y.head(60), raw.x.topRows(60));
  CHECK(acc.rows_seen() == 60);
  CHECK_THROWS_AS(acc.add_rows(raw.y.head(50), raw.x.topRows(50)), ValidationError);
  SketchAccumulator short_acc(phi, 3);
  short_acc.add_rows(raw.y.head(60), raw.x.topRows(60));
  CHECK_THROWS_AS(short_acc.finish(), ValidationError);
  SketchAccumulator wrong_p(phi, 4);
  CHECK_THROWS_AS(wrong_p.add_rows(raw.y.head(10), raw.x.topRows(10)), ValidationError);
}

TEST_CASE("scalar sketch passes the isometry check") {
  const SketchMatrix phi = generate_sketch_matrix(1, 10000, 3);
  const IsometryReport r = verify_isometry(phi, 0.1);
  const double direct = phi.entries().row(0).squaredNorm();
  CHECK(r.min_eig == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.max_eig == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.spectral_dev == doctest::Approx(std::abs(direct - 1.0)).epsilon(1e-9));
  CHECK(r.pass);
}

TEST_CASE("isometry holds across seeds at m=200, n=2000") {
  int passes = 0;
  std::vector<double> devs;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const IsometryReport r = verify_isometry(generate_sketch_matrix(200, 2000, seed), 0.05);
    passes += r.pass;
    devs.push_back(r.spectral_dev);
    CHECK(r.min_eig >= 0.0);
    CHECK(r.min_eig <= r.max_eig);
    CHECK(r.spectral_dev >= 0.0);
    CHECK(r.bound_lower < 1.0);
    CHECK(r.bound_upper > 1.0);
  }
  CHECK(passes >= 95);
  CHECK(oracle::median(devs) <= 3.0 * std::sqrt(200.0 / 2000.0));
}

TEST_CASE("zero operator fails the isometry check") {
  const SketchMatrix zero = SketchMatrix::from_entries_unchecked(RowMatrix::Zero(5, 50));
  const IsometryReport r = verify_isometry(zero, 0.05);
  CHECK(r.min_eig == 0.0);
  CHECK(r.max_eig == 0.0);
  CHECK(r.spectral_dev == 1.0);
  CHECK_FALSE(r.pass);
}

TEST_CASE("non-finite sketch entries are rejected") {
  RowMatrix e = RowMatrix::Zero(2, 5);
  e(1, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SketchMatrix::from_entries_unchecked(e), ValidationError);
  CHECK_THROWS_AS(verify_isometry(generate_sketch_matrix(2, 5, 0), -1.0), ValidationError);
}

}
