#include <benchmark/benchmark.h>

#include "kdv/dynamics.hpp"
#include "kdv/imethod.hpp"
#include "kdv/initial_data.hpp"

using namespace kdv;

static void BM_DealiasedProduct(benchmark::State& state) {
  const auto grid = GridSpec::for_band(static_cast<int>(state.range(0)));
  const auto u = random_band(grid, 1, grid.K, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dealiased_product(u, u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DealiasedProduct)->RangeMultiplier(2)->Range(32, 1024)->Complexity(benchmark::oNLogN);

static void BM_Step(benchmark::State& state) {
  const auto grid = GridSpec::for_band(static_cast<int>(state.range(0)));
  auto p = make_params(grid, 0.5, 1e-4);
  p.integrator = state.range(1) == 0 ? Integrator::ExponentialRK4 : Integrator::IntegratingFactorRK4;
  p.forcing = single_mode(grid, 1, 1.0);
  const KdvStepper stepper(p);
  SolverState s{normalized(random_band(grid, 1, grid.K, 2), 0.0, 0.5), 0.0};
  for (auto _ : state) {
    s = stepper.step(s);
    benchmark::DoNotOptimize(s.u);
  }
}
BENCHMARK(BM_Step)->ArgsProduct({{64, 256, 1024}, {0, 1}})->ArgNames({"K", "ifrk4"});

static void BM_SplitStep(benchmark::State& state) {
  const auto grid = GridSpec::for_band(static_cast<int>(state.range(0)));
  auto p = make_params(grid, 0.5, 1e-4);
  p.split_cutoff = 8.0;
  p.forcing = single_mode(grid, 1, 1.0);
  const KdvStepper stepper(p);
  auto s = init_split(normalized(random_band(grid, 1, grid.K, 3), 0.0, 0.5), p);
  for (auto _ : state) {
    s = stepper.step(s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SplitStep)->Arg(64)->Arg(256)->ArgName("K");

static void BM_Lambda4Sigma4(benchmark::State& state) {
  const auto grid = GridSpec::for_band(static_cast<int>(state.range(0)));
  const auto u = normalized(rough_power_law(grid, 0.01, 4), -0.5, 1.0);
  const IMultiplier im(8, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(lambda4_sigma4(u, im));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Lambda4Sigma4)->RangeMultiplier(2)->Range(16, 128)->Complexity(benchmark::oNCubed);

BENCHMARK_MAIN();
