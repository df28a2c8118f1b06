// Serial reference against the OpenMP kernels on the three sweep workloads.

#include <benchmark/benchmark.h>

#include "doblab/config.hpp"
#include "doblab/loop_builder.hpp"
#include "doblab/stability.hpp"

using namespace doblab;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_StabilityMap(benchmark::State& state) {
    const SystemParams p;
    const std::vector<double> grid = log_gain_grid(10.0, 1e5, 4000);
    for (auto _ : state) benchmark::DoNotOptimize(stability_map(MapAxis::C_f, grid, p, Velocity::filtered, exec_of(state)));
    label(state);
}

void BM_RouthOracleSweep(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(routh_oracle_sweep(10000, 4, exec_of(state)));
    label(state);
}

void BM_RootLocus(benchmark::State& state) {
    const SystemParams p;
    const ForceLoopModel m = compose_force_loop(p.plant, p.obs, p.env, 1.0, Velocity::filtered);
    const std::vector<double> grid = log_gain_grid(1.0, 1e6, 4000);
    for (auto _ : state) benchmark::DoNotOptimize(root_locus(m.open_loop.num(), m.open_loop.den(), grid, exec_of(state)));
    label(state);
}

}  // namespace

BENCHMARK(BM_StabilityMap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RouthOracleSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RootLocus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
