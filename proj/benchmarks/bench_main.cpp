#include <benchmark/benchmark.h>

#include "tumorcord/constitutive.hpp"
#include "tumorcord/evolution2d.hpp"
#include "tumorcord/freeboundary.hpp"
#include "tumorcord/stationary1d.hpp"

using namespace tumorcord;

static void BM_OptimizeEpsilon(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(optimize_epsilon(p));
}
BENCHMARK(BM_OptimizeEpsilon)->Unit(benchmark::kMicrosecond);

static void BM_WidthLinear(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(solve_width_linear(p));
}
BENCHMARK(BM_WidthLinear)->Unit(benchmark::kMicrosecond);

static void BM_WidthGeneral(benchmark::State& state) {
    const ModelParams p;
    for (auto _ : state) benchmark::DoNotOptimize(solve_width_general(p));
}
BENCHMARK(BM_WidthGeneral)->Unit(benchmark::kMillisecond);

static void BM_FixedPoint(benchmark::State& state) {
    const ModelParams p;
    const Grid1D grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fixed_point(1.45, p, grid));
}
BENCHMARK(BM_FixedPoint)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);

static void BM_Reconstruction(benchmark::State& state) {
    const ModelParams p;
    const double w0 = solve_width_linear(p).w0;
    const Grid1D grid(2001);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct_and_errors(w0, p, grid));
}
BENCHMARK(BM_Reconstruction)->Unit(benchmark::kMillisecond);

static void BM_EvolutionStep(benchmark::State& state) {
    EvolutionConfig cfg;
    cfg.grid = Grid2D{static_cast<int>(state.range(0)), static_cast<int>(4 * state.range(0)), 2.5, 10.0};
    Integrator integ(cfg);
    EvolutionState s = init_state(cfg);
    const double dt = stable_dt(cfg);
    integ.step(s, dt);  // builds the preconditioners
    for (auto _ : state) benchmark::DoNotOptimize(integ.step(s, dt));
}
BENCHMARK(BM_EvolutionStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
