#include <benchmark/benchmark.h>

#include "shocklab/dynamics.hpp"
#include "shocklab/noise.hpp"
#include "shocklab/shock.hpp"

using namespace shocklab;

static void BM_SamplerNext(benchmark::State& state) {
    const GridSpec grid(20.0, static_cast<std::size_t>(state.range(0)));
    const Mollifier m(KernelKind::gaussian, 0.5, grid);
    ForcingSampler s(m, 0.5, 1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(s.next(1e-3));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SamplerNext)->RangeMultiplier(2)->Range(512, 4096)->Complexity();

static void BM_StepBurgers(benchmark::State& state) {
    const GridSpec grid(20.0, static_cast<std::size_t>(state.range(0)));
    const Mollifier m(KernelKind::gaussian, 0.5, grid);
    ForcingSampler s(m, 0.5, 1, 0);
    const SchemeConfig cfg;
    const auto inc = s.next(stable_dt(cfg, grid, 1.0));
    Field u = Field::constant(grid, 0.3);
    for (auto _ : state) {
        u = step_burgers(u, inc, cfg);
        benchmark::DoNotOptimize(u[0]);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StepBurgers)->RangeMultiplier(2)->Range(512, 4096)->Complexity();

static void BM_ShockProfile(benchmark::State& state) {
    const GridSpec grid(20.0, static_cast<std::size_t>(state.range(0)));
    const Field vB = Field::constant(grid, -1.0), vT = Field::constant(grid, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(shock_profile(vB, vT, 0.25, 0.5));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShockProfile)->RangeMultiplier(2)->Range(512, 4096)->Complexity();
BENCHMARK_MAIN();
