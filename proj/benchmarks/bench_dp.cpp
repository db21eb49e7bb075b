#include <benchmark/benchmark.h>

#include <vector>

#include "jointseg/dp_segmentation.hpp"
#include "jointseg/rng.hpp"

namespace {

std::vector<double> noisy_steps(std::size_t n, std::uint64_t seed) {
    jointseg::Rng rng(seed);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (i * 4 / n) % 2 + 0.3 * rng.normal();
    return y;
}

void BM_DpSingle(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    const auto y = noisy_steps(n, 1);
    const jointseg::CostIndex costs(y);
    for (auto _ : state) benchmark::DoNotOptimize(jointseg::dp_single(costs, k));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DpSingle)->Args({100, 12})->Args({400, 12})->Args({1000, 12})->Args({100, 50});

void BM_DpJoint(benchmark::State& state) {
    const auto M = static_cast<std::size_t>(state.range(0));
    std::vector<jointseg::CostIndex> costs;
    for (std::size_t m = 0; m < M; ++m) costs.emplace_back(noisy_steps(100, m + 1));
    const std::size_t K = 3 * M;
    for (auto _ : state) benchmark::DoNotOptimize(jointseg::dp_joint(costs, K, std::size_t{12}));
}
BENCHMARK(BM_DpJoint)->Arg(10)->Arg(50);

}  // namespace
