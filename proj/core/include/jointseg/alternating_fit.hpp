#ifndef JOINTSEG_ALTERNATING_FIT_HPP
#define JOINTSEG_ALTERNATING_FIT_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "jointseg/dictionary.hpp"
#include "jointseg/dp_segmentation.hpp"
#include "jointseg/lasso.hpp"
#include "jointseg/series_model.hpp"

namespace jointseg {

enum class SigmaInit {
    robust,  // median absolute first difference / (0.6745 sqrt 2)
    plugin,  // FitConfig::sigma0
};

struct FitConfig {
    std::size_t K_total = 0;
    double gamma = 2.1;
    double epsilon = 1e-3;
    std::size_t max_iterations = 100;
    SigmaInit sigma0_mode = SigmaInit::robust;
    double sigma0 = 0.0;
    /// Caps the number of segments any one series may receive.
    std::optional<std::size_t> k_max_per_series;
    LassoOptions lasso;
};

/// One pass of segmentation, functional update and variance update.
///
/// The three objectives share the penalty weights built from sigma_penalty, so
/// objective_start >= objective_after_segmentation >= objective_after_lasso must
/// hold up to rounding.
struct IterationRecord {
    std::size_t iteration = 0;
    double sigma_penalty = 0.0;
    double sigma = 0.0;
    std::size_t active_count = 0;
    double delta_mu = std::numeric_limits<double>::quiet_NaN();
    double delta_lambda = std::numeric_limits<double>::quiet_NaN();
    double delta_sigma = std::numeric_limits<double>::quiet_NaN();
    bool breakpoints_changed = true;
    double objective_start = std::numeric_limits<double>::quiet_NaN();  // NaN on the first pass
    double objective_after_segmentation = 0.0;
    double objective_after_lasso = 0.0;
    double kkt_gap = 0.0;
};

struct ModelFit {
    std::size_t K_total = 0;
    Segmentation segmentation;
    FunctionalFit functional;
    double rss = 0.0;
    double sigma2 = 0.0;  // rss / N
    std::vector<IterationRecord> trace;
    bool converged = false;
    bool oscillation = false;
    double mbic = std::numeric_limits<double>::quiet_NaN();
    bool mbic_degenerate = false;
};

/// The parameters compared by the stopping rule.
struct ParameterSnapshot {
    std::vector<Breakpoints> breakpoints;
    std::vector<double> means;  // flattened over series
    Eigen::VectorXd lambda;
    double sigma = 0.0;
};

/// True iff the breakpoints agree and every mean, coefficient and sigma moved
/// by less than epsilon.
bool has_converged(const ParameterSnapshot& prev, const ParameterSnapshot& curr, double epsilon);

/// Starting noise scale. Throws InvalidArgument when N < 2 or no series has two observations.
double initial_sigma(const SeriesSet& series, SigmaInit mode, double plugin = 0.0);

void validate(const FitConfig& config, const SeriesSet& series);

/// Alternates exact joint segmentation of Y - F lambda, weighted Lasso on
/// Y - T mu and the variance update until the parameters settle, starting
/// from lambda = 0.
///
/// `raw_tables`, if given, are stage-one tables of the raw data deep enough for
/// K_total; they replace the first segmentation's stage one.
ModelFit fit_fixed_k(const SeriesSet& series, const LassoSolver& solver, const FitConfig& config,
                     const std::vector<DpTable>* raw_tables = nullptr);

ModelFit fit_fixed_k(const SeriesSet& series, const DictionaryMatrix& dict, const FitConfig& config);

/// Baseline where the shared bias is one free effect per position, estimated as
/// the across-series mean residual and centred to sum zero. All series must
/// share the same times. functional.lambda holds the per-position effects.
ModelFit fit_position_baseline(const SeriesSet& series, const FitConfig& config,
                               const std::vector<DpTable>* raw_tables = nullptr);

/// Checks the per-iteration descent of the frozen-weight objective.
bool trace_is_monotone(const ModelFit& fit, double rel_tol = 1e-9);

}  // namespace jointseg

#endif  // JOINTSEG_ALTERNATING_FIT_HPP
