#include <benchmark/benchmark.h>

#include "jointseg/dictionary.hpp"
#include "jointseg/lasso.hpp"
#include "jointseg/rng.hpp"
#include "jointseg/sim_bench.hpp"

namespace {

// Simulation dictionary stacked over M series of length 100.
void BM_LassoSolve(benchmark::State& state) {
    jointseg::SimConfig cfg;
    cfg.M = static_cast<std::size_t>(state.range(0));
    cfg.sigma = 0.5;
    const auto data = jointseg::simulate(cfg, 7);
    const auto dict = jointseg::assemble(jointseg::simulation_dictionary(100.0), data.series);
    const jointseg::LassoSolver solver(dict);
    const auto y = data.series.stacked_values();
    const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    const auto w = jointseg::penalty_weights(0.5, dict, 2.1);
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(target, w));
}
BENCHMARK(BM_LassoSolve)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_GramSetup(benchmark::State& state) {
    jointseg::SimConfig cfg;
    cfg.M = static_cast<std::size_t>(state.range(0));
    const auto data = jointseg::simulate(cfg, 7);
    const auto dict = jointseg::assemble(jointseg::simulation_dictionary(100.0), data.series);
    for (auto _ : state) benchmark::DoNotOptimize(jointseg::LassoSolver(dict));
}
BENCHMARK(BM_GramSetup)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

}  // namespace
