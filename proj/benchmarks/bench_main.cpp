#include <benchmark/benchmark.h>

#include "imgrx/array_geometry.hpp"
#include "imgrx/oracle.hpp"
#include "imgrx/validation.hpp"

using namespace imgrx;

static void BM_OverlapMoments(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const InnerArray array{m * m, 400e-6, 0.8 * 400e-6 / m};
  const BeamFootprint spot{{13e-6, -7e-6}, 90e-6};
  for (auto _ : state) benchmark::DoNotOptimize(overlap_moments(array, spot));
}
BENCHMARK(BM_OverlapMoments)->Arg(1)->Arg(7)->Arg(10);

static void BM_SolveGlobal(benchmark::State& state) {
  const auto space = calibrated_design_space(OuterGain::Linear);
  const Scheme scheme = state.range(0) == 0 ? Scheme{Ook{}} : Scheme{DcoOfdm{512}};
  for (auto _ : state) benchmark::DoNotOptimize(solve_global(space, {}, scheme));
}
BENCHMARK(BM_SolveGlobal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_GridSearch(benchmark::State& state) {
  const DesignProblem p(calibrated_design_space(OuterGain::Linear).context(36, 64), {},
                        DcoOfdm{512});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grid_search(p, {n, n}));
}
BENCHMARK(BM_GridSearch)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_McSumAiSquared(benchmark::State& state) {
  const InnerArray array{49, 400e-6, 44.81e-6};
  const McSpec mc{static_cast<std::uint64_t>(state.range(0)), 7};
  for (auto _ : state) benchmark::DoNotOptimize(mc_sum_ai_squared(array, 60e-6, mc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McSumAiSquared)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
