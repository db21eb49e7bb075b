#include "jointseg/report.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "jointseg/dataset_io.hpp"
#include "jointseg/errors.hpp"
#include "jointseg/rng.hpp"
#include "json.hpp"

namespace jointseg {

namespace {

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd out;
    if (v.empty()) return out;
    double s = 0.0;
    for (double x : v) s += x;
    out.mean = s / static_cast<double>(v.size());
    if (v.size() < 2) return out;
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return out;
}

std::string fmt(double v) { return std::isfinite(v) ? format_double(v) : "NA"; }

std::string fmt(const std::optional<MeanStd>& v, bool std_part = false) {
    if (!v) return "NA";
    return fmt(std_part ? v->std : v->mean);
}

// Rate averaged over replicates; undefined when every denominator is zero.
std::optional<MeanStd> rate(const std::vector<const ReplicateResult*>& reps, double BreakpointRates::*value,
                            std::size_t BreakpointRates::*denominator, BreakpointRates ReplicateResult::*which) {
    std::vector<double> v;
    bool defined = false;
    for (const auto* r : reps) {
        v.push_back(r->*which.*value);
        defined = defined || (r->*which.*denominator) > 0;
    }
    if (!defined) return std::nullopt;
    return mean_std(v);
}

}  // namespace

std::vector<CellSummary> summarize(const GridResult& result) {
    std::vector<CellSummary> out;
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        for (Method m : result.methods) {
            CellSummary s;
            s.cell = c;
            s.M = result.cells[c].M;
            s.sigma = result.cells[c].sigma;
            s.method = m;
            s.truth_ids = result.truth_ids.at(c);
            std::vector<const ReplicateResult*> ok;
            for (const auto& r : result.replicates) {
                if (r.cell != c || r.method != m) continue;
                if (r.error.empty())
                    ok.push_back(&r);
                else
                    ++s.failures;
            }
            s.replicates = ok.size();
            std::vector<double> mu, f, dk, ffdr, act, it;
            s.selection_rate.assign(s.truth_ids.size(), 0.0);
            std::size_t converged = 0;
            for (const auto* r : ok) {
                mu.push_back(r->rmse_mu);
                f.push_back(r->rmse_f);
                dk.push_back(static_cast<double>(r->K_hat) - static_cast<double>(r->K_true));
                ffdr.push_back(r->functions.fdr);
                act.push_back(static_cast<double>(r->functions.active_count));
                it.push_back(static_cast<double>(r->iterations));
                for (std::size_t i = 0; i < s.truth_ids.size() && i < r->functions.hits.size(); ++i)
                    s.selection_rate[i] += r->functions.hits[i] ? 1.0 : 0.0;
                converged += r->converged ? 1 : 0;
                s.trace_monotone = s.trace_monotone && r->trace_monotone;
                if (s.f_hat_mean.empty()) s.f_hat_mean.assign(r->f_hat.size(), 0.0);
                for (std::size_t t = 0; t < r->f_hat.size() && t < s.f_hat_mean.size(); ++t)
                    s.f_hat_mean[t] += r->f_hat[t];
            }
            if (!ok.empty()) {
                const auto n = static_cast<double>(ok.size());
                for (double& x : s.selection_rate) x /= n;
                for (double& x : s.f_hat_mean) x /= n;
                s.converged_rate = static_cast<double>(converged) / n;
            }
            s.rmse_mu = mean_std(mu);
            s.rmse_f = mean_std(f);
            s.k_diff = mean_std(dk);
            s.function_fdr = mean_std(ffdr);
            s.active_count = mean_std(act);
            s.iterations = mean_std(it);
            using BR = BreakpointRates;
            using RR = ReplicateResult;
            s.fdr = rate(ok, &BR::fdr, &BR::detected, &RR::exact);
            s.fnr = rate(ok, &BR::fnr, &BR::true_count, &RR::exact);
            s.fdr_tol1 = rate(ok, &BR::fdr, &BR::detected, &RR::within_one);
            s.fnr_tol1 = rate(ok, &BR::fnr, &BR::true_count, &RR::within_one);
            out.push_back(std::move(s));
        }
    }
    return out;
}

namespace {

std::string summary_csv(const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    os << "M,sigma,method,metric,mean,std,n\n";
    for (const auto& s : cells) {
        const auto row = [&](const std::string& metric, const std::optional<MeanStd>& v) {
            os << s.M << ',' << fmt(s.sigma) << ',' << to_string(s.method) << ',' << metric << ',' << fmt(v) << ','
               << fmt(v, true) << ',' << s.replicates << '\n';
        };
        row("rmse_mu", s.rmse_mu);
        row("rmse_f", s.rmse_f);
        row("K_hat_minus_K", s.k_diff);
        row("fdr", s.fdr);
        row("fnr", s.fnr);
        row("fdr_tol1", s.fdr_tol1);
        row("fnr_tol1", s.fnr_tol1);
        if (s.method != Method::position) {
            for (std::size_t i = 0; i < s.truth_ids.size(); ++i)
                row("selected_id" + std::to_string(s.truth_ids[i]), MeanStd{s.selection_rate[i], 0.0});
            row("function_fdr", s.function_fdr);
            row("active_count", s.active_count);
        }
        row("iterations", s.iterations);
        row("converged_rate", MeanStd{s.converged_rate, 0.0});
        row("failures", MeanStd{static_cast<double>(s.failures), 0.0});
    }
    return os.str();
}

std::string replicates_csv(const GridResult& result) {
    std::ostringstream os;
    os << "cell,M,sigma,method,replicate,seed,K_true,K_hat,rmse_mu,rmse_f,detected,true_breakpoints,fdr,fnr,"
          "fdr_tol1,fnr_tol1,function_fdr,active_count,truth_hits,iterations,converged,trace_monotone,error\n";
    for (const auto& r : result.replicates) {
        os << r.cell << ',' << r.M << ',' << fmt(r.sigma) << ',' << to_string(r.method) << ',' << r.replicate << ','
           << r.seed << ',';
        if (!r.error.empty()) {
            std::string msg = r.error;
            for (char& ch : msg)
                if (ch == '"' || ch == '\n' || ch == ',') ch = ' ';
            os << r.K_true << ",NA,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA,\"" << msg << "\"\n";
            continue;
        }
        std::string hits;
        const auto& ids = result.truth_ids.at(r.cell);
        for (std::size_t i = 0; i < ids.size() && i < r.functions.hits.size(); ++i)
            hits += (hits.empty() ? "" : " ") + std::to_string(ids[i]) + "=" + (r.functions.hits[i] ? "1" : "0");
        os << r.K_true << ',' << r.K_hat << ',' << fmt(r.rmse_mu) << ',' << fmt(r.rmse_f) << ',' << r.exact.detected
           << ',' << r.exact.true_count << ',' << fmt(r.exact.fdr) << ',' << fmt(r.exact.fnr) << ','
           << fmt(r.within_one.fdr) << ',' << fmt(r.within_one.fnr) << ',';
        if (r.method == Method::position)
            os << "NA,NA,NA,";
        else
            os << fmt(r.functions.fdr) << ',' << r.functions.active_count << ',' << hits << ',';
        os << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << (r.trace_monotone ? 1 : 0) << ",\n";
    }
    return os.str();
}

std::string fig2_csv(const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    os << "M,sigma,method,rmse_f_mean,rmse_f_std,n\n";
    for (const auto& s : cells)
        os << s.M << ',' << fmt(s.sigma) << ',' << to_string(s.method) << ',' << fmt(s.rmse_f.mean) << ','
           << fmt(s.rmse_f.std) << ',' << s.replicates << '\n';
    return os.str();
}

std::string fig3_csv(const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    os << "M,sigma,method,rmse_mu,K_hat_minus_K,fdr,fnr,fdr_tol1,fnr_tol1,n\n";
    for (const auto& s : cells)
        os << s.M << ',' << fmt(s.sigma) << ',' << to_string(s.method) << ',' << fmt(s.rmse_mu.mean) << ','
           << fmt(s.k_diff.mean) << ',' << fmt(s.fdr) << ',' << fmt(s.fnr) << ',' << fmt(s.fdr_tol1) << ','
           << fmt(s.fnr_tol1) << ',' << s.replicates << '\n';
    return os.str();
}

std::string relative(std::optional<double> small, std::optional<double> large) {
    if (!small || !large || !(*small != 0.0)) return "NA";
    return fmt(100.0 * (*small - *large) / *small);
}

std::string table1_csv(const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    std::size_t m_lo = 0, m_hi = 0;
    for (const auto& s : cells) {
        if (m_lo == 0 || s.M < m_lo) m_lo = s.M;
        m_hi = std::max(m_hi, s.M);
    }
    os << "sigma,method,M_small,M_large,fdr_relative_pct,rmse_f_relative_pct\n";
    if (m_lo == m_hi) return os.str();
    // (sigma, method) -> summaries at the two extreme M.
    std::map<std::pair<double, std::string>, std::pair<const CellSummary*, const CellSummary*>> pairs;
    std::vector<std::pair<double, std::string>> order;
    for (const auto& s : cells) {
        const auto key = std::make_pair(s.sigma, to_string(s.method));
        if (!pairs.count(key)) order.push_back(key);
        auto& p = pairs[key];
        if (s.M == m_lo) p.first = &s;
        if (s.M == m_hi) p.second = &s;
    }
    for (const auto& key : order) {
        const auto [lo, hi] = pairs[key];
        if (!lo || !hi) continue;
        const auto mean = [](const std::optional<MeanStd>& v) {
            return v ? std::optional<double>(v->mean) : std::nullopt;
        };
        os << fmt(key.first) << ',' << key.second << ',' << m_lo << ',' << m_hi << ','
           << relative(mean(lo->fdr), mean(hi->fdr)) << ',' << relative(lo->rmse_f.mean, hi->rmse_f.mean) << '\n';
    }
    return os.str();
}

std::string table2_csv(const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    std::vector<std::size_t> ids;
    for (const auto& s : cells)
        if (s.method != Method::position) {
            ids = s.truth_ids;
            break;
        }
    os << "M,sigma,method";
    for (auto id : ids) os << ",id" << id << "_pct";
    os << ",function_fdr,mean_active,n\n";
    for (const auto& s : cells) {
        if (s.method == Method::position) continue;
        if (s.truth_ids != ids) throw StructuralError("cells disagree on the generating dictionary IDs");
        os << s.M << ',' << fmt(s.sigma) << ',' << to_string(s.method);
        for (double r : s.selection_rate) os << ',' << fmt(std::round(1e9 * 100.0 * r) / 1e9);  // drop 7.000000000000001
        os << ',' << fmt(s.function_fdr.mean) << ',' << fmt(s.active_count.mean) << ',' << s.replicates << '\n';
    }
    return os.str();
}

std::string fitted_f_csv(const GridResult& result, const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    os << "M,sigma,method,t,f_true,f_hat_mean\n";
    for (const auto& s : cells) {
        const std::size_t n = result.cells[s.cell].n;
        for (std::size_t t = 1; t <= n && t <= s.f_hat_mean.size(); ++t)
            os << s.M << ',' << fmt(s.sigma) << ',' << to_string(s.method) << ',' << t << ','
               << fmt(true_bias(t, n)) << ',' << fmt(s.f_hat_mean[t - 1]) << '\n';
    }
    return os.str();
}

std::string run_json(const GridResult& result, const std::string& config_ini) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["tool"] = "jointseg";
    j["version"] = JOINTSEG_VERSION;
    j["rng"] = std::string(Rng::algorithm);
    j["replicate_seed"] = "splitmix64(cell_seed ^ splitmix64(replicate))";
    j["noise_parameter"] = "sigma is the noise standard deviation";
    ordered_json methods = ordered_json::array();
    for (Method m : result.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    ordered_json cells = ordered_json::array();
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const auto& s = result.cells[c];
        ordered_json cell;
        cell["cell"] = c;
        cell["n"] = s.n;
        cell["M"] = s.M;
        cell["sigma"] = s.sigma;
        cell["mean_K"] = s.mean_K;
        cell["jump_values"] = s.jump_values;
        cell["jump_probs"] = s.jump_probs;
        cell["first_segment_zero"] = s.first_segment_zero;
        cell["replicates"] = s.replicates;
        cell["seed"] = s.seed;
        cell["truth_ids"] = result.truth_ids.at(c);
        cells.push_back(cell);
    }
    j["cells"] = cells;
    j["config_ini"] = config_ini;
    return j.dump(2) + "\n";
}

}  // namespace

std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const GridResult& result,
                                                const std::string& config_ini) {
    const auto cells = summarize(result);
    const std::vector<std::pair<std::string, std::string>> files{
        {"summary.csv", summary_csv(cells)},
        {"replicates.csv", replicates_csv(result)},
        {"fig2_rmse_f.csv", fig2_csv(cells)},
        {"fig3_segmentation.csv", fig3_csv(cells)},
        {"table1_relative.csv", table1_csv(cells)},
        {"table2_selection.csv", table2_csv(cells)},
        {"fitted_f.csv", fitted_f_csv(result, cells)},
        {"run.json", run_json(result, config_ini)},
    };
    std::vector<std::filesystem::path> written;
    for (const auto& [name, content] : files) {
        write_file_atomic(dir / name, content);
        written.push_back(dir / name);
    }
    return written;
}

}  // namespace jointseg
