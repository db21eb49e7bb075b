#include "jointseg/alternating_fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "jointseg/errors.hpp"

namespace jointseg {

namespace {

using Vec = Eigen::VectorXd;

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::vector<double> flat_means(const Segmentation& seg) {
    std::vector<double> out;
    for (const auto& m : seg.means) out.insert(out.end(), m.begin(), m.end());
    return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

// Everything the loop carries between passes.
struct State {
    Segmentation seg;
    Vec signal;
    FunctionalFit functional;
    double sigma = 0.0;

    ParameterSnapshot snapshot() const { return {seg.breakpoints, flat_means(seg), functional.lambda, sigma}; }
};

// The functional sub-step: given the target Y - T mu, the frozen weights and
// the previous coefficients, returns the new functional fit. May shift the
// segmentation (position baseline centring) as long as T mu + bias is unchanged.
using FunctionalStep =
    std::function<FunctionalFit(const Vec& target, double sigma_penalty, const FunctionalFit& previous, Segmentation& seg)>;
// Penalty of coefficients under the weights of a given sigma.
using PenaltyOf = std::function<double(const Vec& lambda, double sigma_penalty)>;

ModelFit run_alternation(const SeriesSet& series, const FitConfig& config, std::size_t bias_size,
                         const FunctionalStep& functional_step, const PenaltyOf& penalty_of,
                         const std::vector<DpTable>* raw_tables) {
    validate(config, series);
    const auto lengths = series.lengths();
    const std::size_t M = series.num_series();
    const std::size_t K = config.K_total;
    const Vec Y = to_vec(series.stacked_values());
    const auto N = static_cast<double>(Y.size());

    std::size_t depth = K - M + 1;
    if (config.k_max_per_series) depth = std::min(depth, *config.k_max_per_series);

    const double sigma0 = initial_sigma(series, config.sigma0_mode, config.sigma0);

    ModelFit out;
    out.K_total = K;

    State current;
    current.functional.lambda = Vec::Zero(static_cast<Eigen::Index>(bias_size));
    current.functional.fitted = Vec::Zero(Y.size());
    current.sigma = sigma0;
    std::vector<std::vector<Breakpoints>> seen;

    const auto objective = [&](const State& s, double sigma_penalty) {
        return (Y - s.signal - s.functional.fitted).squaredNorm() + penalty_of(s.functional.lambda, sigma_penalty);
    };

    State chosen;
    bool have_chosen = false;
    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        IterationRecord rec;
        rec.iteration = it;
        const double sigma_penalty = current.sigma;
        rec.sigma_penalty = sigma_penalty;
        if (it > 1) rec.objective_start = objective(current, sigma_penalty);

        // (i) segmentation of Y - F lambda^(h)
        const Vec r1 = Y - current.functional.fitted;
        const std::vector<double> r1v(r1.data(), r1.data() + r1.size());
        std::vector<DpTable> fresh;
        const std::vector<DpTable>* tables = nullptr;
        if (it == 1 && raw_tables) {
            tables = raw_tables;
        } else {
            fresh = build_tables(r1v, lengths, depth);
            tables = &fresh;
        }
        const auto joint = allocate_segments(*tables, K);
        State next;
        next.seg = fit_means(joint.breakpoints, r1v, lengths);
        next.signal = to_vec(segmentation_signal(next.seg));
        next.functional = current.functional;
        rec.objective_after_segmentation = objective(next, sigma_penalty);

        // (ii) functional part on Y - T mu^(h+1) with weights from sigma^(h)
        next.functional = functional_step(Y - next.signal, sigma_penalty, current.functional, next.seg);
        next.signal = to_vec(segmentation_signal(next.seg));
        rec.objective_after_lasso = objective(next, sigma_penalty);
        rec.kkt_gap = next.functional.kkt_gap;
        rec.active_count = next.functional.active_set.size();

        // (iii) variance
        next.sigma = std::sqrt((Y - next.signal - next.functional.fitted).squaredNorm() / N);
        rec.sigma = next.sigma;

        if (it > 1) {
            const auto a = current.snapshot();
            const auto b = next.snapshot();
            rec.breakpoints_changed = a.breakpoints != b.breakpoints;
            rec.delta_mu = max_abs_diff(a.means, b.means);
            rec.delta_lambda = max_abs_diff(a.lambda, b.lambda);
            rec.delta_sigma = std::abs(a.sigma - b.sigma);
        }
        out.trace.push_back(rec);

        if (it > 1 && has_converged(current.snapshot(), next.snapshot(), config.epsilon)) {
            out.converged = true;
            chosen = std::move(next);
            have_chosen = true;
            break;
        }
        if (it > 1 && next.seg.breakpoints != current.seg.breakpoints &&
            std::find(seen.begin(), seen.end(), next.seg.breakpoints) != seen.end()) {
            // A revisited configuration: keep the better of the last two passes.
            out.oscillation = true;
            chosen = rec.objective_start < rec.objective_after_lasso ? std::move(current) : std::move(next);
            have_chosen = true;
            break;
        }
        seen.push_back(next.seg.breakpoints);
        current = std::move(next);
    }
    if (!have_chosen) chosen = std::move(current);

    out.segmentation = std::move(chosen.seg);
    out.functional = std::move(chosen.functional);
    const Vec resid = Y - to_vec(segmentation_signal(out.segmentation)) - out.functional.fitted;
    out.rss = resid.squaredNorm();
    out.sigma2 = out.rss / N;
    return out;
}

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    const double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lo + hi);
}

}  // namespace

bool has_converged(const ParameterSnapshot& prev, const ParameterSnapshot& curr, double epsilon) {
    if (prev.breakpoints != curr.breakpoints) return false;
    if (!(max_abs_diff(prev.means, curr.means) < epsilon)) return false;
    if (!(max_abs_diff(prev.lambda, curr.lambda) < epsilon)) return false;
    return std::abs(prev.sigma - curr.sigma) < epsilon;
}

double initial_sigma(const SeriesSet& series, SigmaInit mode, double plugin) {
    if (series.total_size() < 2) throw InvalidArgument("noise scale needs at least two observations");
    if (mode == SigmaInit::plugin) {
        if (!(plugin >= 0.0) || !std::isfinite(plugin)) throw InvalidArgument("plugin sigma must be finite and >= 0");
        return plugin;
    }
    std::vector<double> diffs;
    for (const auto& s : series.series())
        for (std::size_t i = 1; i < s.size(); ++i) diffs.push_back(std::abs(s.values[i] - s.values[i - 1]));
    if (diffs.empty()) throw InvalidArgument("noise scale needs a series with at least two observations");
    return median(std::move(diffs)) / (0.6745 * std::sqrt(2.0));
}

void validate(const FitConfig& config, const SeriesSet& series) {
    const std::size_t M = series.num_series();
    if (!(config.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (config.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (!(config.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (config.k_max_per_series && *config.k_max_per_series < 1)
        throw InvalidArgument("k_max_per_series must be >= 1");
    std::size_t capacity = 0;
    for (const auto& s : series.series())
        capacity += std::min(s.size(), config.k_max_per_series.value_or(s.size()));
    if (config.K_total < M || config.K_total > capacity)
        throw InvalidArgument("K=" + std::to_string(config.K_total) + " infeasible; must lie in " +
                              std::to_string(M) + ".." + std::to_string(capacity));
}

ModelFit fit_fixed_k(const SeriesSet& series, const LassoSolver& solver, const FitConfig& config,
                     const std::vector<DpTable>* raw_tables) {
    const auto& dict = solver.dictionary();
    if (dict.rows() != series.total_size())
        throw StructuralError("dictionary has " + std::to_string(dict.rows()) + " rows for " +
                              std::to_string(series.total_size()) + " observations");
    auto step = [&](const Vec& target, double sigma_penalty, const FunctionalFit& previous, Segmentation&) {
        const auto weights = penalty_weights(sigma_penalty, dict, config.gamma);
        auto fit = solver.solve(target, weights, config.lasso, &previous.lambda);
        if (!fit.lambda.allFinite()) throw NumericalError("lasso produced non-finite coefficients");
        return fit;
    };
    auto penalty = [&](const Vec& lambda, double sigma_penalty) {
        return penalty_term(lambda, penalty_weights(sigma_penalty, dict, config.gamma));
    };
    return run_alternation(series, config, dict.size(), step, penalty, raw_tables);
}

ModelFit fit_fixed_k(const SeriesSet& series, const DictionaryMatrix& dict, const FitConfig& config) {
    const LassoSolver solver(dict);
    return fit_fixed_k(series, solver, config);
}

ModelFit fit_position_baseline(const SeriesSet& series, const FitConfig& config,
                               const std::vector<DpTable>* raw_tables) {
    const auto& first = series[0];
    const std::size_t n = first.size();
    for (const auto& s : series.series())
        if (s.times != first.times)
            throw InvalidArgument("position baseline needs every series on the same time grid");
    const std::size_t M = series.num_series();

    auto step = [&](const Vec& target, double, const FunctionalFit&, Segmentation& seg) {
        FunctionalFit fit;
        fit.lambda = Vec::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t m = 0; m < M; ++m)
            fit.lambda += target.segment(static_cast<Eigen::Index>(m * n), static_cast<Eigen::Index>(n));
        fit.lambda /= static_cast<double>(M);
        // mu and a constant shift of beta are confounded: centre beta, move the level into mu.
        const double level = fit.lambda.mean();
        fit.lambda.array() -= level;
        for (auto& means : seg.means)
            for (double& mu : means) mu += level;
        fit.fitted = fit.lambda.replicate(static_cast<Eigen::Index>(M), 1);
        for (Eigen::Index t = 0; t < fit.lambda.size(); ++t)
            if (fit.lambda(t) != 0.0) fit.active_set.push_back(static_cast<std::size_t>(t) + 1);
        fit.objective = (target.array() - level - fit.fitted.array()).matrix().squaredNorm();
        return fit;
    };
    auto penalty = [](const Vec&, double) { return 0.0; };
    return run_alternation(series, config, n, step, penalty, raw_tables);
}

bool trace_is_monotone(const ModelFit& fit, double rel_tol) {
    for (const auto& rec : fit.trace) {
        const double scale = std::max(1.0, std::abs(rec.objective_after_segmentation));
        if (!std::isnan(rec.objective_start) &&
            rec.objective_after_segmentation > rec.objective_start + rel_tol * scale)
            return false;
        if (rec.objective_after_lasso > rec.objective_after_segmentation + rel_tol * scale) return false;
    }
    return true;
}

}  // namespace jointseg
