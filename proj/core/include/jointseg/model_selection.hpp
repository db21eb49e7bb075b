#ifndef JOINTSEG_MODEL_SELECTION_HPP
#define JOINTSEG_MODEL_SELECTION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jointseg/alternating_fit.hpp"

namespace jointseg {

struct MbicValue {
    double value = 0.0;
    /// Perfect fit (SS_wg == 0); value is +infinity.
    bool degenerate = false;
};

/// Modified BIC of a joint segmentation into K segments of N observations over
/// M series with residual sum of squares ss_wg:
///
///   log Gamma((N-K+1)/2) - (N-K+1)/2 log SS_wg + (1/2 - (K-M)) log N
///     - 1/2 sum_m sum_k log(n_k^m)
///
/// Larger is better. Throws InvalidArgument unless N > K.
MbicValue mbic_score(double ss_wg, std::size_t N, std::size_t M, std::span<const std::size_t> segment_lengths);

MbicValue mbic_score(double ss_wg, std::size_t N, std::size_t M, const Segmentation& seg);

/// Score of a fit; `zero_floor` treats rss <= zero_floor as an exact fit.
MbicValue mbic_score(const ModelFit& fit, std::size_t N, std::size_t M, double zero_floor = 0.0);

enum class FitMethod { lasso, position };

struct SelectionEntry {
    std::size_t K = 0;
    std::optional<ModelFit> fit;  // empty when the fit failed
    MbicValue mbic;
    std::string error;
};

struct SelectionResult {
    std::vector<SelectionEntry> entries;  // K_min..K_max in order
    std::size_t chosen_K = 0;

    const ModelFit& chosen() const;
};

/// Default upper end of the sweep: M * ceil(mean length / 10), capped by feasibility.
std::size_t default_k_max(const SeriesSet& series, std::optional<std::size_t> k_max_per_series = std::nullopt);

/// Fits every K in [K_min, K_max] from a cold start and keeps the largest mBIC,
/// ties going to the smaller K. `config.K_total` is ignored.
/// Throws InvalidArgument for an infeasible range and NumericalError if every fit failed.
SelectionResult select_k(const SeriesSet& series, const DictionaryMatrix& dict, std::size_t K_min,
                         std::size_t K_max, const FitConfig& config);

SelectionResult select_k(const SeriesSet& series, const LassoSolver& solver, std::size_t K_min,
                         std::size_t K_max, const FitConfig& config);

/// Same sweep with the per-position baseline in place of the Lasso.
SelectionResult select_k_position(const SeriesSet& series, std::size_t K_min, std::size_t K_max,
                                  const FitConfig& config);

}  // namespace jointseg

#endif  // JOINTSEG_MODEL_SELECTION_HPP
