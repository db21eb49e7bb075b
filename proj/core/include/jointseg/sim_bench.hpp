#ifndef JOINTSEG_SIM_BENCH_HPP
#define JOINTSEG_SIM_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jointseg/alternating_fit.hpp"
#include "jointseg/dictionary.hpp"
#include "jointseg/series_model.hpp"

namespace jointseg {

/// One simulation design cell.
struct SimConfig {
    std::size_t n = 100;
    std::size_t M = 10;
    /// Noise standard deviation.
    double sigma = 0.1;
    double mean_K = 3.0;
    std::vector<double> jump_values{-2.0, -1.0, 1.0, 2.0};
    std::vector<double> jump_probs{0.2, 0.3, 0.3, 0.2};
    std::size_t replicates = 100;
    std::uint64_t seed = 20150601;
    /// Segment means alternate 0 / jump starting with 0 (false: starting with a jump).
    bool first_segment_zero = true;
};

void validate(const SimConfig& config);

struct GroundTruth {
    Segmentation segmentation;
    std::vector<double> bias;  // f(t), t = 1..n
    double sigma = 0.0;
};

struct SimulatedData {
    SeriesSet series;
    GroundTruth truth;
};

/// 0.3 sin(2 pi t / 20) + 0.5 [t = 0.1 n] - [t = 0.5 n] + 2 [t = 0.6 n].
double true_bias(std::size_t t, std::size_t n);

/// Draws one data set. A pure function of (config, seed); config.seed is ignored.
SimulatedData simulate(const SimConfig& config, std::uint64_t seed);

/// Seed of replicate `replicate` of a cell seeded with `base`.
std::uint64_t replicate_seed(std::uint64_t base, std::size_t replicate);

double rmse_mu(const GroundTruth& truth, const Segmentation& estimate);
/// f_hat on the grid t = 1..n.
double rmse_f(const GroundTruth& truth, std::span<const double> f_hat);
/// Uses the fitted bias of the first series.
double rmse_f(const GroundTruth& truth, const ModelFit& fit);

struct BreakpointRates {
    double fdr = 0.0;
    double fnr = 0.0;
    std::size_t detected = 0;
    std::size_t true_count = 0;
    std::size_t false_detections = 0;
    std::size_t missed = 0;
};

/// Internal breakpoints only. Each detection is matched to the nearest unmatched
/// true breakpoint of its series within +-tolerance (ties to the earlier one);
/// FDR = unmatched detections / detections, FNR = unmatched truths / truths,
/// both 0 when the denominator is 0.
BreakpointRates breakpoint_rates(const Segmentation& truth, const Segmentation& estimate, std::size_t tolerance);

struct FunctionSelection {
    std::vector<bool> hits;  // per truth ID, in the given order
    double fdr = 0.0;
    std::size_t active_count = 0;
};

FunctionSelection function_selection_metrics(std::span<const std::size_t> truth_ids,
                                             std::span<const std::size_t> active_set);

/// IDs of the dictionary columns that generate the simulated bias: the spike
/// columns non-zero at t = 0.1n, 0.5n, 0.6n and the column equal to
/// sin(2 pi t / 20) on the first series' grid. Missing ones are skipped.
std::vector<std::size_t> simulation_truth_ids(const DictionaryMatrix& dict, std::size_t n);

enum class Method { lasso, lasso_true_k, position };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct BenchOptions {
    /// K_total ignored. At most 12 segments per series: true counts above 10
    /// have Poisson(3) probability below 1e-4.
    FitConfig fit{.k_max_per_series = 12, .lasso = {}};
    /// Sweep K = M..ceil(m + k_max_sd * sqrt(m)), m = mean_K * M, the expected
    /// segment count. The library default M * ceil(n / 10) when unset.
    std::optional<double> k_max_sd = 6.0;
    std::vector<BasisSpec> dictionary = simulation_dictionary(100.0);
    std::size_t threads = 1;
};

struct ReplicateResult {
    std::size_t cell = 0;
    std::size_t M = 0;
    double sigma = 0.0;
    Method method = Method::lasso;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::size_t K_true = 0;
    std::size_t K_hat = 0;
    double rmse_mu = 0.0;
    double rmse_f = 0.0;
    BreakpointRates exact;
    BreakpointRates within_one;
    FunctionSelection functions;
    std::size_t iterations = 0;
    bool converged = false;
    bool trace_monotone = false;
    std::vector<double> f_hat;
    std::string error;  // non-empty: fit failed, metrics unset
};

struct GridResult {
    std::vector<SimConfig> cells;
    std::vector<Method> methods;
    std::vector<std::vector<std::size_t>> truth_ids;  // per cell
    /// Ordered by cell, replicate, method.
    std::vector<ReplicateResult> replicates;
};

/// Simulates every replicate of every cell and fits each method on it.
/// Failures are recorded per replicate and the grid continues.
GridResult run_grid(std::span<const SimConfig> grid, std::span<const Method> methods, const BenchOptions& options);

/// Fits one method on one simulated data set and scores it.
ReplicateResult evaluate(const SimulatedData& data, const LassoSolver& solver, Method method,
                         std::span<const std::size_t> truth_ids, const SimConfig& config,
                         const BenchOptions& options);

/// Reference design: n = 100, M in {10, 50}, sigma in {0.1, 0.2, 0.5, 1.0, 1.5}.
std::vector<SimConfig> default_grid(std::size_t replicates = 100, std::uint64_t seed = 20150601);

}  // namespace jointseg

#endif  // JOINTSEG_SIM_BENCH_HPP
