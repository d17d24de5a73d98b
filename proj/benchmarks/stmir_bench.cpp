#include <benchmark/benchmark.h>

#include "stmir/bounds.hpp"
#include "stmir/mir.hpp"
#include "stmir/moments.hpp"
#include "stmir/monte_carlo.hpp"
#include "stmir/sweep.hpp"

namespace {

using namespace stmir;

const ReceptorSpec& receptor() {
  static const ReceptorSpec spec = chr2_skeleton();
  return spec;
}

const TruncatedGaussian& operating_point() {
  static const TruncatedGaussian d(1.0, 0.5, 1e-5, 2.0);
  return d;
}

void BM_MirQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mir_quadrature(receptor(), operating_point()).value);
}
BENCHMARK(BM_MirQuadrature);

// Includes the raw-form cross-check at min(K, 20).
void BM_MirSeries(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mir_series(receptor(), operating_point(), order).value);
}
BENCHMARK(BM_MirSeries)->Arg(5)->Arg(20)->Arg(40)->Arg(64);

void BM_MirBounds(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mir_bounds(receptor(), operating_point(), s).upper);
}
BENCHMARK(BM_MirBounds)->Arg(2)->Arg(4);

void BM_MirDiscrete(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mir_discrete(receptor(), operating_point(), 1e-3).value);
}
BENCHMARK(BM_MirDiscrete);

// Narrow truncations push the backward band of the recursion far out.
void BM_RawMoments(benchmark::State& state) {
  const TruncatedGaussian d(1.0, state.range(0) == 0 ? 0.5 : 0.02, 1e-5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(raw_moments(d, kMaxMomentOrder).raw.back());
}
BENCHMARK(BM_RawMoments)->Arg(0)->Arg(1);

void BM_Simulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(receptor(), operating_point(), 1e-3, n, 7).size());
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  SweepConfig config(receptor());
  config.a = 2e-2;
  config.mu_bar_grid = {0.2, 1.8, 20};
  config.sigma_bar_grid = {0.1, 1.0, 20};
  config.methods.quadrature = true;
  config.methods.bounds_s2 = true;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(config, 1).size());
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
