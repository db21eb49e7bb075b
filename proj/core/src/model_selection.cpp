#include "jointseg/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "jointseg/errors.hpp"

namespace jointseg {

MbicValue mbic_score(double ss_wg, std::size_t N, std::size_t M, std::span<const std::size_t> segment_lengths) {
    const std::size_t K = segment_lengths.size();
    if (N <= K) throw InvalidArgument("mBIC needs N > K (N=" + std::to_string(N) + ", K=" + std::to_string(K) + ")");
    if (!(ss_wg >= 0.0)) throw InvalidArgument("residual sum of squares must be non-negative");
    if (ss_wg == 0.0) return {std::numeric_limits<double>::infinity(), true};

    const double a = 0.5 * static_cast<double>(N - K + 1);
    const double dof = 0.5 - (static_cast<double>(K) - static_cast<double>(M));
    double length_term = 0.0;
    for (std::size_t len : segment_lengths) length_term += std::log(static_cast<double>(len));
    const double v = std::lgamma(a) - a * std::log(ss_wg) + dof * std::log(static_cast<double>(N)) - 0.5 * length_term;
    return {v, false};
}

MbicValue mbic_score(double ss_wg, std::size_t N, std::size_t M, const Segmentation& seg) {
    std::vector<std::size_t> lengths;
    for (const auto& bp : seg.breakpoints) {
        const auto l = segment_lengths(bp);
        lengths.insert(lengths.end(), l.begin(), l.end());
    }
    return mbic_score(ss_wg, N, M, lengths);
}

MbicValue mbic_score(const ModelFit& fit, std::size_t N, std::size_t M, double zero_floor) {
    const double ss = fit.rss <= zero_floor ? 0.0 : fit.rss;
    return mbic_score(ss, N, M, fit.segmentation);
}

const ModelFit& SelectionResult::chosen() const {
    for (const auto& e : entries)
        if (e.K == chosen_K && e.fit) return *e.fit;
    throw NumericalError("selection has no fit for the chosen K");
}

std::size_t default_k_max(const SeriesSet& series, std::optional<std::size_t> k_max_per_series) {
    const std::size_t M = series.num_series();
    const double mean_len = static_cast<double>(series.total_size()) / static_cast<double>(M);
    std::size_t k = M * static_cast<std::size_t>(std::ceil(mean_len / 10.0));
    std::size_t capacity = 0;
    for (const auto& s : series.series()) capacity += std::min(s.size(), k_max_per_series.value_or(s.size()));
    return std::max(M, std::min(k, capacity));
}

namespace {

using Fitter = std::function<ModelFit(const FitConfig&, const std::vector<DpTable>*)>;

SelectionResult sweep(const SeriesSet& series, std::size_t K_min, std::size_t K_max, const FitConfig& config,
                      const Fitter& fitter) {
    const std::size_t M = series.num_series();
    const std::size_t N = series.total_size();
    if (K_min < M || K_min > K_max)
        throw InvalidArgument("K range [" + std::to_string(K_min) + ", " + std::to_string(K_max) +
                              "] must satisfy M <= K_min <= K_max");
    FitConfig probe = config;
    probe.K_total = K_max;
    validate(probe, series);
    if (K_max >= N) throw InvalidArgument("K_max must be smaller than the number of observations");

    // Every cold start segments the raw data first; share that stage one.
    const auto values = series.stacked_values();
    const auto lengths = series.lengths();
    std::size_t depth = K_max - M + 1;
    if (config.k_max_per_series) depth = std::min(depth, *config.k_max_per_series);
    const auto raw_tables = build_tables(values, lengths, depth);

    double y2 = 0.0;
    for (double v : values) y2 += v * v;
    // Rounding leaves a perfect fit at a few ulps rather than exactly zero.
    const double zero_floor = 1e-24 * std::max(1.0, y2);

    SelectionResult result;
    bool any = false;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t K = K_min; K <= K_max; ++K) {
        SelectionEntry entry;
        entry.K = K;
        FitConfig c = config;
        c.K_total = K;
        try {
            entry.fit = fitter(c, &raw_tables);
            entry.mbic = mbic_score(*entry.fit, N, M, zero_floor);
            entry.fit->mbic = entry.mbic.value;
            entry.fit->mbic_degenerate = entry.mbic.degenerate;
            if (!any || entry.mbic.value > best) {
                best = entry.mbic.value;
                result.chosen_K = K;
                any = true;
            }
        } catch (const std::exception& e) {
            entry.fit.reset();
            entry.error = e.what();
        }
        result.entries.push_back(std::move(entry));
    }
    if (!any) throw NumericalError("every fit in the K sweep failed");
    return result;
}

}  // namespace

SelectionResult select_k(const SeriesSet& series, const LassoSolver& solver, std::size_t K_min, std::size_t K_max,
                         const FitConfig& config) {
    return sweep(series, K_min, K_max, config, [&](const FitConfig& c, const std::vector<DpTable>* raw) {
        return fit_fixed_k(series, solver, c, raw);
    });
}

SelectionResult select_k(const SeriesSet& series, const DictionaryMatrix& dict, std::size_t K_min,
                         std::size_t K_max, const FitConfig& config) {
    const LassoSolver solver(dict);
    return select_k(series, solver, K_min, K_max, config);
}

SelectionResult select_k_position(const SeriesSet& series, std::size_t K_min, std::size_t K_max,
                                  const FitConfig& config) {
    return sweep(series, K_min, K_max, config, [&](const FitConfig& c, const std::vector<DpTable>* raw) {
        return fit_position_baseline(series, c, raw);
    });
}

}  // namespace jointseg
