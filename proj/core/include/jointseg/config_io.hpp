#ifndef JOINTSEG_CONFIG_IO_HPP
#define JOINTSEG_CONFIG_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jointseg/alternating_fit.hpp"
#include "jointseg/dictionary.hpp"
#include "jointseg/sim_bench.hpp"

namespace jointseg {

struct SelectConfig {
    std::optional<std::size_t> K_min;  // default M
    std::optional<std::size_t> K_max;  // default M * ceil(mean length / 10)
};

struct GridConfig {
    std::vector<std::size_t> M{10, 50};
    std::vector<double> sigma{0.1, 0.2, 0.5, 1.0, 1.5};
    std::size_t replicates = 100;
    std::vector<Method> methods{Method::lasso, Method::lasso_true_k, Method::position};
    std::uint64_t seed = 20150601;
    std::size_t threads = 1;
    std::optional<double> k_max_sd = 6.0;
    std::optional<std::size_t> k_max_per_series = 12;
};

/// Everything one config file can set. Sections:
///
///   [dictionary.N]  kind = haar | fourier | fourier_grid | monomial, with
///                   resolution, length, j_max, min_period, degrees, target
///   [dictionary]    preset = simulation | gps (instead of numbered sections)
///   [fit]           K, gamma, epsilon, max_iterations, sigma0, k_max_per_series,
///                   lasso_tol, lasso_max_sweeps
///   [select]        kmin, kmax
///   [simulate]      n, M, sigma, mean_K, jump_values, jump_probs,
///                   first_segment_zero, seed
///   [grid]          M, sigma, replicates, methods, seed, threads, k_max_sd,
///                   k_max_per_series
///
/// `sigma` is always the noise standard deviation.
struct ToolConfig {
    std::vector<BasisSpec> dictionary;
    FitConfig fit;
    SelectConfig select;
    SimConfig simulate;
    GridConfig grid;
};

/// Throws InputError (with the line for syntax errors) on malformed files,
/// unknown sections or keys and unparsable values.
ToolConfig parse_config(std::istream& in);
ToolConfig load_config(const std::filesystem::path& path);

/// "simulation": the 150-function simulation dictionary on period 100.
/// "gps": a Fourier grid with periods of at least 8 time units.
std::vector<BasisSpec> dictionary_preset(std::string_view name);

/// Canonical INI text; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const ToolConfig& config);

/// One SimConfig per (M, sigma) pair of the grid, M outermost, on top of `base`.
std::vector<SimConfig> expand_grid(const GridConfig& grid, const SimConfig& base);

/// Benchmark options implied by a config; the simulation dictionary on the
/// simulated series length when the config names none.
BenchOptions bench_options(const ToolConfig& config);

}  // namespace jointseg

#endif  // JOINTSEG_CONFIG_IO_HPP
