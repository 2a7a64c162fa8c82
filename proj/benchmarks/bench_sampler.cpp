#include <benchmark/benchmark.h>

#include "sketchhs/random.hpp"
#include "sketchhs/sampler.hpp"

using namespace sketchhs;

namespace {

SketchedData random_sketch(std::size_t m, std::size_t p) {
  Rng rng(derive_seed(99, {m, p}));
  SketchedData d;
  d.x_tilde.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < d.x_tilde.cols(); ++j)
    for (Eigen::Index i = 0; i < d.x_tilde.rows(); ++i) d.x_tilde(i, j) = rng.normal();
  d.y_tilde.resize(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < d.y_tilde.size(); ++i) d.y_tilde[i] = rng.normal();
  d.n = 10 * m;
  return d;
}

Vector unit_delta(std::size_t p) { return Vector::Constant(static_cast<Eigen::Index>(p), 0.5); }

void BM_FastBetaDraw(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const SketchedData d = random_sketch(m, p);
  FastBetaSampler s(d);
  const Vector delta = unit_delta(p);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(s.draw(delta, 1.0, rng));
}
BENCHMARK(BM_FastBetaDraw)->Args({100, 2000})->Args({400, 2000})->Args({100, 4000})
    ->Unit(benchmark::kMillisecond);

void BM_DirectBetaDraw(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const SketchedData d = random_sketch(m, p);
  DirectBetaSampler s(d);
  const Vector delta = unit_delta(p);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(s.draw(delta, 1.0, rng));
}
BENCHMARK(BM_DirectBetaDraw)->Args({100, 200})->Args({100, 800})->Unit(benchmark::kMillisecond);

void BM_GibbsIteration(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const SketchedData d = random_sketch(m, p);
  SamplerConfig cfg;
  cfg.n_iter = 20;
  cfg.n_burn = 10;
  for (auto _ : state) {
    const ChainOutput out = run_chain(d, cfg);
    state.SetIterationTime(out.per_iter_seconds);
  }
}
BENCHMARK(BM_GibbsIteration)->Args({100, 2000})->Args({200, 2000})->UseManualTime()
    ->Unit(benchmark::kMillisecond);

}  // namespace
