#include <benchmark/benchmark.h>

#include "jointseg/alternating_fit.hpp"
#include "jointseg/sim_bench.hpp"

namespace {

void BM_FitTrueK(benchmark::State& state) {
    jointseg::SimConfig cfg;
    cfg.M = static_cast<std::size_t>(state.range(0));
    cfg.sigma = 0.5;
    const auto data = jointseg::simulate(cfg, 11);
    const auto dict = jointseg::assemble(jointseg::simulation_dictionary(100.0), data.series);
    const jointseg::LassoSolver solver(dict);
    jointseg::FitConfig fc;
    fc.K_total = data.truth.segmentation.total_segments();
    fc.k_max_per_series = 12;
    for (auto _ : state) benchmark::DoNotOptimize(jointseg::fit_fixed_k(data.series, solver, fc));
}
BENCHMARK(BM_FitTrueK)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
