#include <benchmark/benchmark.h>

#include "nrm/fluid.hpp"
#include "nrm/offline.hpp"
#include "nrm/policy.hpp"
#include "nrm/sample_path.hpp"

using namespace nrm;

static void BM_SamplePath(benchmark::State& state) {
  auto spec = make_degenerate_triangle(0.1, state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_path(spec, 1, rep++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePath)->Arg(1000)->Arg(16000);

static void BM_SolveFluidSingle(benchmark::State& state) {
  auto spec = make_single_uniform(0.5, 4000);
  auto cap = spec.initial_capacity();
  for (auto _ : state) benchmark::DoNotOptimize(solve_fluid(spec, cap, spec.horizon));
}
BENCHMARK(BM_SolveFluidSingle);

static void BM_SolveFluidTriangle(benchmark::State& state) {
  auto spec = make_degenerate_triangle(0.1, 4000);
  auto cap = spec.initial_capacity();
  std::vector<double> warm = {0.45, 0.0, 0.45};
  for (auto _ : state) benchmark::DoNotOptimize(solve_fluid(spec, cap, spec.horizon, &warm));
}
BENCHMARK(BM_SolveFluidTriangle);

static void BM_SampleDualSingle(benchmark::State& state) {
  auto spec = make_single_uniform(0.5, state.range(0));
  auto cap = spec.initial_capacity();
  SamplePath path = sample_path(spec, 3, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        minimize_dual(spec, cap, spec.horizon + 1, DualMode::Sample, &path, 1));
}
BENCHMARK(BM_SampleDualSingle)->Arg(1000)->Arg(8000);

static void BM_OfflineLpTriangle(benchmark::State& state) {
  auto spec = make_degenerate_triangle(0.1, state.range(0));
  auto cap = spec.initial_capacity();
  SamplePath path = sample_path(spec, 3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(offline_lp(spec, path, 1, cap));
}
BENCHMARK(BM_OfflineLpTriangle)->Arg(1000)->Arg(8000);

static void BM_PolicyRun(benchmark::State& state) {
  auto spec = make_degenerate_triangle(0.1, state.range(0));
  SamplePath path = sample_path(spec, 3, 0);
  EstimatorConfig cfg{PolicyKind::Log2Fluid};
  for (auto _ : state) benchmark::DoNotOptimize(run_policy(cfg, spec, path));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PolicyRun)->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
