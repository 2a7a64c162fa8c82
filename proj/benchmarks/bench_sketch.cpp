#include <benchmark/benchmark.h>

#include "sketchhs/random.hpp"
#include "sketchhs/sketch.hpp"

using namespace sketchhs;

namespace {

void BM_GenerateSketch(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(generate_sketch_matrix(m, n, 3));
}
BENCHMARK(BM_GenerateSketch)->Args({100, 2000})->Args({400, 2000})->Unit(benchmark::kMillisecond);

void BM_ApplySketch(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<Eigen::Index>(state.range(1));
  const auto p = static_cast<Eigen::Index>(state.range(2));
  Rng rng(5);
  Matrix x(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.normal();
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = rng.normal();
  const SketchMatrix phi = generate_sketch_matrix(m, static_cast<std::size_t>(n), 4);
  for (auto _ : state) benchmark::DoNotOptimize(apply_sketch(phi, y, x));
}
BENCHMARK(BM_ApplySketch)->Args({100, 2000, 1000})->Args({200, 2000, 1000})
    ->Unit(benchmark::kMillisecond);

}  // namespace
