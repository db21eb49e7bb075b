#include "jointseg/result_document.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "jointseg/rng.hpp"
#include "json.hpp"

namespace jointseg {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json basis_json(const BasisSpec& spec) {
    ordered_json j;
    std::visit(
        [&](const auto& b) {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, HaarBasis>) {
                j["kind"] = "haar";
                j["resolution"] = b.resolution;
                j["length"] = b.length;
            } else if constexpr (std::is_same_v<B, FourierFixedBasis>) {
                j["kind"] = "fourier_fixed";
                j["j_max"] = b.j_max;
                j["length"] = b.length;
            } else if constexpr (std::is_same_v<B, FourierGridBasis>) {
                j["kind"] = "fourier_grid";
                j["min_period"] = b.min_period;
            } else {
                j["kind"] = "monomials";
                j["degrees"] = b.degrees;
            }
        },
        spec.kind);
    j["target"] = spec.target == EvalTarget::covariate ? "covariate" : "time";
    return j;
}

ordered_json config_json(const ToolConfig& c) {
    ordered_json j;
    ordered_json dict = ordered_json::array();
    for (const auto& spec : c.dictionary) dict.push_back(basis_json(spec));
    j["dictionary"] = dict;
    const auto& f = c.fit;
    ordered_json fit;
    fit["K"] = f.K_total ? ordered_json(f.K_total) : ordered_json(nullptr);
    fit["gamma"] = f.gamma;
    fit["epsilon"] = f.epsilon;
    fit["max_iterations"] = f.max_iterations;
    fit["sigma0"] = f.sigma0_mode == SigmaInit::robust ? ordered_json("robust") : ordered_json(f.sigma0);
    fit["k_max_per_series"] = f.k_max_per_series ? ordered_json(*f.k_max_per_series) : ordered_json(nullptr);
    fit["lasso_tol"] = f.lasso.rel_tol;
    fit["lasso_max_sweeps"] = f.lasso.max_sweeps;
    j["fit"] = fit;
    ordered_json sel;
    sel["kmin"] = c.select.K_min ? ordered_json(*c.select.K_min) : ordered_json(nullptr);
    sel["kmax"] = c.select.K_max ? ordered_json(*c.select.K_max) : ordered_json(nullptr);
    j["select"] = sel;
    return j;
}

ordered_json trace_json(const std::vector<IterationRecord>& trace) {
    ordered_json out = ordered_json::array();
    for (const auto& r : trace) {
        ordered_json j;
        j["iteration"] = r.iteration;
        j["sigma_penalty"] = number(r.sigma_penalty);
        j["sigma"] = number(r.sigma);
        j["active_count"] = r.active_count;
        j["breakpoints_changed"] = r.breakpoints_changed;
        j["delta_mu"] = number(r.delta_mu);
        j["delta_lambda"] = number(r.delta_lambda);
        j["delta_sigma"] = number(r.delta_sigma);
        j["objective_start"] = number(r.objective_start);
        j["objective_after_segmentation"] = number(r.objective_after_segmentation);
        j["objective_after_lasso"] = number(r.objective_after_lasso);
        j["kkt_gap"] = number(r.kkt_gap);
        out.push_back(j);
    }
    return out;
}

}  // namespace

std::string tool_version() { return JOINTSEG_VERSION; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string result_document(const SeriesSet& series, const DictionaryMatrix& dict, const ModelFit& fit,
                            const SelectionResult* selection, const RunInfo& info) {
    ordered_json doc;
    doc["tool"] = "jointseg";
    doc["version"] = tool_version();
    doc["command"] = info.command;
    doc["timestamp"] = info.timestamp.empty() ? ordered_json(nullptr) : ordered_json(info.timestamp);
    doc["seed"] = info.seed ? ordered_json(*info.seed) : ordered_json(nullptr);

    ordered_json input;
    input["path"] = info.input_path;
    input["M"] = series.num_series();
    input["N"] = series.total_size();
    doc["input"] = input;
    doc["config"] = config_json(info.config);
    doc["config_ini"] = to_ini(info.config);

    ordered_json d;
    d["size"] = dict.size();
    d["nonzero_columns"] = dict.active_count();
    doc["dictionary"] = d;

    ordered_json res;
    res["K"] = fit.K_total;
    res["sigma2"] = number(fit.sigma2);
    res["rss"] = number(fit.rss);
    res["mbic"] = number(fit.mbic);
    res["mbic_degenerate"] = fit.mbic_degenerate;
    ordered_json per_series = ordered_json::array();
    for (std::size_t m = 0; m < series.num_series(); ++m) {
        const auto& s = series[m];
        const auto& bp = fit.segmentation.breakpoints.at(m);
        const auto& means = fit.segmentation.means.at(m);
        ordered_json js;
        js["id"] = s.id;
        js["n"] = s.size();
        ordered_json idx = ordered_json::array(), times = ordered_json::array(), mu = ordered_json::array();
        for (std::size_t k = 0; k < bp.size(); ++k) {
            idx.push_back(bp[k]);
            times.push_back(s.times[bp[k] - 1]);
            mu.push_back(number(means[k]));
        }
        js["breakpoints_index"] = idx;
        js["breakpoints_time"] = times;
        js["means"] = mu;
        per_series.push_back(js);
    }
    res["series"] = per_series;
    ordered_json functions = ordered_json::array();
    for (std::size_t id : fit.functional.active_set) {
        ordered_json jf;
        jf["id"] = id;
        jf["label"] = id <= dict.size() ? dict.label(id - 1) : std::string("position[t=") + std::to_string(id) + "]";
        jf["coefficient"] = number(fit.functional.lambda(static_cast<Eigen::Index>(id - 1)));
        functions.push_back(jf);
    }
    res["functions"] = functions;
    doc["result"] = res;

    if (selection) {
        ordered_json sel;
        sel["K_min"] = selection->entries.front().K;
        sel["K_max"] = selection->entries.back().K;
        sel["chosen_K"] = selection->chosen_K;
        ordered_json table = ordered_json::array();
        for (const auto& e : selection->entries) {
            ordered_json row;
            row["K"] = e.K;
            if (e.fit) {
                row["mbic"] = number(e.mbic.value);
                row["degenerate"] = e.mbic.degenerate;
                row["rss"] = number(e.fit->rss);
                row["sigma2"] = number(e.fit->sigma2);
                row["iterations"] = e.fit->trace.size();
                row["converged"] = e.fit->converged;
                row["error"] = nullptr;
            } else {
                row["mbic"] = nullptr;
                row["degenerate"] = false;
                row["rss"] = nullptr;
                row["sigma2"] = nullptr;
                row["iterations"] = 0;
                row["converged"] = false;
                row["error"] = e.error;
            }
            table.push_back(row);
        }
        sel["mbic_table"] = table;
        doc["selection"] = sel;
    } else {
        doc["selection"] = nullptr;
    }

    ordered_json diag;
    diag["iterations"] = fit.trace.size();
    diag["converged"] = fit.converged;
    diag["oscillation"] = fit.oscillation;
    diag["lasso_converged"] = fit.functional.converged;
    diag["final_kkt_gap"] = number(fit.functional.kkt_gap);
    diag["trace_monotone"] = trace_is_monotone(fit);
    diag["trace"] = trace_json(fit.trace);
    doc["diagnostics"] = diag;
    return doc.dump(2) + "\n";
}

std::string simulation_truth_document(const SimulatedData& data, const SimConfig& config, std::uint64_t seed) {
    ordered_json doc;
    doc["tool"] = "jointseg";
    doc["version"] = tool_version();
    doc["seed"] = seed;
    doc["rng"] = std::string(Rng::algorithm);
    ordered_json cfg;
    cfg["n"] = config.n;
    cfg["M"] = config.M;
    cfg["sigma"] = config.sigma;
    cfg["mean_K"] = config.mean_K;
    cfg["jump_values"] = config.jump_values;
    cfg["jump_probs"] = config.jump_probs;
    cfg["first_segment_zero"] = config.first_segment_zero;
    doc["config"] = cfg;
    ordered_json series = ordered_json::array();
    for (std::size_t m = 0; m < data.series.num_series(); ++m) {
        ordered_json js;
        js["id"] = data.series[m].id;
        js["breakpoints_index"] = data.truth.segmentation.breakpoints[m];
        js["means"] = data.truth.segmentation.means[m];
        series.push_back(js);
    }
    doc["K"] = data.truth.segmentation.total_segments();
    doc["series"] = series;
    doc["bias"] = data.truth.bias;
    const auto dict = assemble(simulation_dictionary(static_cast<double>(config.n)), data.series);
    doc["generating_ids"] = simulation_truth_ids(dict, config.n);
    return doc.dump(2) + "\n";
}

}  // namespace jointseg
