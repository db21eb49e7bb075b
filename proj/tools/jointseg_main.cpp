// jointseg: joint segmentation of multiple series with a dictionary-based common bias.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jointseg/config_io.hpp"
#include "jointseg/dataset_io.hpp"
#include "jointseg/errors.hpp"
#include "jointseg/model_selection.hpp"
#include "jointseg/report.hpp"
#include "jointseg/result_document.hpp"
#include "jointseg/sim_bench.hpp"

namespace {

using namespace jointseg;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct FitFlags {
    std::string input;
    std::string config;
    std::string preset;
    std::optional<std::size_t> K;
    std::optional<double> gamma;
    std::optional<double> epsilon;
    std::optional<std::size_t> max_iterations;
    std::optional<std::string> sigma0;
    std::optional<std::size_t> k_max_per_series;
    std::optional<std::size_t> kmin;
    std::optional<std::size_t> kmax;
    std::optional<std::uint64_t> seed;
    std::string out = "-";
    bool no_timestamp = false;
};

void add_fit_flags(CLI::App* cmd, FitFlags& f, bool select) {
    cmd->add_option("--input,-i", f.input, "Dataset CSV (series_id,time,value[,covariate])")->required();
    cmd->add_option("--dict,--config,-c", f.config, "Config file with dictionary and fit sections");
    cmd->add_option("--preset", f.preset, "Dictionary preset when the config names none")
        ->check(CLI::IsMember({"simulation", "gps"}));
    if (!select) cmd->add_option("--K,-K", f.K, "Total number of segments over all series");
    cmd->add_option("--gamma", f.gamma, "Penalty constant gamma (> 0, default 2.1)");
    cmd->add_option("--epsilon", f.epsilon, "Convergence threshold (default 1e-3)");
    cmd->add_option("--max-iter", f.max_iterations, "Maximum alternating passes (default 100)");
    cmd->add_option("--sigma0", f.sigma0, "Initial noise scale: robust or a number");
    cmd->add_option("--k-max-per-series", f.k_max_per_series, "Cap on segments in any one series");
    if (select) {
        cmd->add_option("--kmin", f.kmin, "Smallest K of the sweep (default M)");
        cmd->add_option("--kmax", f.kmax, "Largest K of the sweep (default M * ceil(mean length / 10))");
    }
    cmd->add_option("--seed", f.seed, "Recorded in the document");
    cmd->add_option("--out,-o", f.out, "Result document path, - for stdout");
    cmd->add_flag("--no-timestamp", f.no_timestamp, "Leave the timestamp field null");
}

ToolConfig resolve(const FitFlags& f) {
    ToolConfig c = f.config.empty() ? ToolConfig{} : load_config(f.config);
    if (c.dictionary.empty() && !f.preset.empty()) c.dictionary = dictionary_preset(f.preset);
    if (c.dictionary.empty())
        throw InputError("no dictionary: give a config with [dictionary.N] sections or --preset simulation|gps");
    if (f.K) c.fit.K_total = *f.K;
    if (f.gamma) c.fit.gamma = *f.gamma;
    if (f.epsilon) c.fit.epsilon = *f.epsilon;
    if (f.max_iterations) c.fit.max_iterations = *f.max_iterations;
    if (f.sigma0) {
        if (*f.sigma0 == "robust") {
            c.fit.sigma0_mode = SigmaInit::robust;
        } else {
            c.fit.sigma0_mode = SigmaInit::plugin;
            try {
                std::size_t used = 0;
                c.fit.sigma0 = std::stod(*f.sigma0, &used);
                if (used != f.sigma0->size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw InputError("--sigma0 expects robust or a number, got '" + *f.sigma0 + "'");
            }
        }
    }
    if (f.k_max_per_series) c.fit.k_max_per_series = *f.k_max_per_series;
    if (f.kmin) c.select.K_min = *f.kmin;
    if (f.kmax) c.select.K_max = *f.kmax;
    return c;
}

void emit(const std::string& out, const std::string& text) {
    if (out == "-")
        std::cout << text;
    else
        write_file_atomic(out, text);
}

RunInfo run_info(const char* command, const FitFlags& f, const ToolConfig& c) {
    RunInfo info;
    info.command = command;
    info.input_path = f.input;
    info.seed = f.seed;
    info.config = c;
    if (!f.no_timestamp) info.timestamp = utc_timestamp();
    return info;
}

int run_fit(const FitFlags& f) {
    const ToolConfig c = resolve(f);
    if (c.fit.K_total == 0) throw InputError("fit needs the number of segments: --K or K in [fit]");
    const SeriesSet series = read_dataset(f.input);
    const DictionaryMatrix dict = assemble(c.dictionary, series);
    const LassoSolver solver(dict);
    ModelFit fit = fit_fixed_k(series, solver, c.fit);
    const double y2 = [&] {
        double s = 0.0;
        for (double v : series.stacked_values()) s += v * v;
        return s;
    }();
    if (series.total_size() > fit.K_total) {
        const auto score = mbic_score(fit, series.total_size(), series.num_series(), 1e-24 * std::max(1.0, y2));
        fit.mbic = score.value;
        fit.mbic_degenerate = score.degenerate;
    }
    emit(f.out, result_document(series, dict, fit, nullptr, run_info("fit", f, c)));
    return 0;
}

int run_select(const FitFlags& f) {
    ToolConfig c = resolve(f);
    const SeriesSet series = read_dataset(f.input);
    const std::size_t M = series.num_series();
    const std::size_t K_min = c.select.K_min.value_or(M);
    std::size_t K_max = c.select.K_max.value_or(default_k_max(series, c.fit.k_max_per_series));
    if (!c.select.K_max) K_max = std::max(K_min, std::min(K_max, series.total_size() - 1));
    const DictionaryMatrix dict = assemble(c.dictionary, series);
    const LassoSolver solver(dict);
    const SelectionResult sel = select_k(series, solver, K_min, K_max, c.fit);
    c.select.K_min = K_min;
    c.select.K_max = K_max;
    emit(f.out, result_document(series, dict, sel.chosen(), &sel, run_info("select", f, c)));
    return 0;
}

struct SimulateFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> M;
    std::optional<std::size_t> n;
    std::optional<double> sigma;
    std::string out;
    std::string truth;
};

int run_simulate(const SimulateFlags& f) {
    ToolConfig c = f.config.empty() ? ToolConfig{} : load_config(f.config);
    SimConfig& sim = c.simulate;
    if (f.seed) sim.seed = *f.seed;
    if (f.M) sim.M = *f.M;
    if (f.n) sim.n = *f.n;
    if (f.sigma) sim.sigma = *f.sigma;
    try {
        validate(sim);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const SimulatedData data = simulate(sim, sim.seed);
    std::ostringstream csv;
    write_dataset(csv, data.series);
    emit(f.out, csv.str());
    std::string truth = f.truth;
    if (truth.empty() && f.out != "-") truth = f.out + ".truth.json";
    if (!truth.empty()) write_file_atomic(truth, simulation_truth_document(data, sim, sim.seed));
    return 0;
}

struct BenchmarkFlags {
    std::string grid;
    std::optional<std::size_t> reps;
    std::vector<std::string> methods;
    std::vector<std::size_t> M;
    std::vector<double> sigma;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string out = "benchmark_out";
    bool quiet = false;
};

int run_benchmark(const BenchmarkFlags& f) {
    ToolConfig c = f.grid.empty() ? ToolConfig{} : load_config(f.grid);
    GridConfig& g = c.grid;
    if (f.reps) g.replicates = *f.reps;
    if (!f.methods.empty()) {
        g.methods.clear();
        for (const auto& m : f.methods) {
            try {
                g.methods.push_back(method_from_string(m));
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
        }
    }
    if (!f.M.empty()) g.M = f.M;
    if (!f.sigma.empty()) g.sigma = f.sigma;
    if (f.seed) g.seed = *f.seed;
    if (f.threads) g.threads = *f.threads;
    const auto cells = expand_grid(g, c.simulate);
    for (const auto& cell : cells) {
        try {
            validate(cell);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    if (!f.quiet)
        std::cerr << "benchmark: " << cells.size() << " cells x " << g.replicates << " replicates x "
                  << g.methods.size() << " methods\n";
    const GridResult result = run_grid(cells, g.methods, bench_options(c));
    const auto files = write_report(f.out, result, to_ini(c));
    std::size_t failures = 0;
    for (const auto& r : result.replicates) failures += r.error.empty() ? 0 : 1;
    if (!f.quiet) {
        for (const auto& p : files) std::cerr << "wrote " << p.string() << '\n';
        if (failures) std::cerr << failures << " replicate fits failed; see replicates.csv\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint segmentation of multiple series with a common functional bias"};
    app.set_version_flag("--version", jointseg::tool_version());
    app.require_subcommand(1);

    FitFlags fit_flags;
    auto* fit = app.add_subcommand("fit", "Fit at a fixed total number of segments and write a result document");
    add_fit_flags(fit, fit_flags, false);

    FitFlags select_flags;
    auto* select = app.add_subcommand("select", "Sweep K, choose it by modified BIC and write a result document");
    add_fit_flags(select, select_flags, true);

    SimulateFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "Draw a simulated dataset and its ground truth");
    sim->add_option("--config,-c", sim_flags.config, "Config file; its [simulate] section is used");
    sim->add_option("--seed", sim_flags.seed, "Seed (overrides the config)");
    sim->add_option("--M", sim_flags.M, "Number of series");
    sim->add_option("--n", sim_flags.n, "Series length");
    sim->add_option("--sigma", sim_flags.sigma, "Noise standard deviation");
    sim->add_option("--out,-o", sim_flags.out, "Dataset CSV path, - for stdout")->required();
    sim->add_option("--truth", sim_flags.truth, "Ground-truth JSON path (default <out>.truth.json)");

    BenchmarkFlags bench_flags;
    auto* bench = app.add_subcommand("benchmark", "Run the simulation grid and write metric files");
    bench->add_option("--grid,-g", bench_flags.grid, "Config file with [grid] and [simulate] sections");
    bench->add_option("--reps,-r", bench_flags.reps, "Replicates per cell");
    bench->add_option("--methods", bench_flags.methods, "Comma list of lasso, lasso_trueK, position")->delimiter(',');
    bench->add_option("--M", bench_flags.M, "Comma list of series counts")->delimiter(',');
    bench->add_option("--sigma", bench_flags.sigma, "Comma list of noise standard deviations")->delimiter(',');
    bench->add_option("--seed", bench_flags.seed, "Seed shared by every cell");
    bench->add_option("--threads", bench_flags.threads, "Worker threads");
    bench->add_option("--out,-o", bench_flags.out, "Output directory");
    bench->add_flag("--quiet,-q", bench_flags.quiet, "No progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*fit) return run_fit(fit_flags);
        if (*select) return run_select(select_flags);
        if (*sim) return run_simulate(sim_flags);
        if (*bench) return run_benchmark(bench_flags);
    } catch (const jointseg::NumericalError& e) {
        std::cerr << "jointseg: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const jointseg::InputError& e) {
        std::cerr << "jointseg: input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "jointseg: invalid argument: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "jointseg: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
