#include <benchmark/benchmark.h>

#include "csign/calibrate.hpp"
#include "csign/sweep.hpp"

using namespace csign;

static void BM_Closure(benchmark::State& state) {
    const auto seeds = computational_seeds();
    const auto stages = array_stages();
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_states(seeds, stages).space.dimension());
}
BENCHMARK(BM_Closure);

static void BM_Hamiltonian(benchmark::State& state) {
    const auto p = PhysParams::from_ratios(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(build_array_hamiltonian(array_space(), p));
}
BENCHMARK(BM_Hamiltonian);

static void BM_RunArrayClosed(benchmark::State& state) {
    const auto input = p_test(array_space());
    SimParams p;
    p.t = 99;
    p.phs = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_array(input, p).error);
}
BENCHMARK(BM_RunArrayClosed)->Unit(benchmark::kMillisecond);

static void BM_RunArrayLeak(benchmark::State& state) {
    const auto input = p_test(array_space());
    SimParams p;
    p.t = 17;
    p.phs = 1;
    p.ly_over_g = 1e-3;
    p.steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_array(input, p).error);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunArrayLeak)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_CandidateTable(benchmark::State& state) {
    const auto p = PhysParams::from_ratios(0.0);
    for (auto _ : state) benchmark::DoNotOptimize(candidate_table(p, 2.0, 100.0).size());
}
BENCHMARK(BM_CandidateTable);

static void BM_Sweep(benchmark::State& state) {
    SweepSpec spec;
    spec.axes.push_back(Axis{SweepParam::t, 2.0, 12.0, 0.05, 0, {}});
    spec.fixed.phs = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec).size());
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
