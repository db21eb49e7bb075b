#ifndef JOINTSEG_REPORT_HPP
#define JOINTSEG_REPORT_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jointseg/sim_bench.hpp"

namespace jointseg {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 below two values
};

/// Aggregates of one (cell, method) block over its successful replicates.
struct CellSummary {
    std::size_t cell = 0;
    std::size_t M = 0;
    double sigma = 0.0;
    Method method = Method::lasso;
    std::size_t replicates = 0;  // successful
    std::size_t failures = 0;
    std::vector<std::size_t> truth_ids;
    std::vector<double> selection_rate;  // per truth ID, in [0, 1]
    MeanStd rmse_mu, rmse_f, k_diff, function_fdr, active_count, iterations;
    /// Breakpoint rates; empty when no replicate detected (FDR) or had (FNR)
    /// an internal breakpoint, so the ratio is undefined for the whole cell.
    std::optional<MeanStd> fdr, fnr, fdr_tol1, fnr_tol1;
    double converged_rate = 0.0;
    bool trace_monotone = true;  // over every successful replicate
    std::vector<double> f_hat_mean;  // t = 1..n
};

/// In cell order, methods in the order run. Deterministic: replicates are
/// reduced in index order.
std::vector<CellSummary> summarize(const GridResult& result);

/// Writes the metric files of a grid run into `dir`:
///
///   summary.csv           M,sigma,method,metric,mean,std,n (long form)
///   replicates.csv        one row per replicate and method
///   fig2_rmse_f.csv       RMSE(f) against sigma
///   fig3_segmentation.csv RMSE(mu), K_hat - K, FDR, FNR against sigma
///   table1_relative.csv   relative FDR and RMSE(f) change between the
///                         smallest and largest M, in percent
///   table2_selection.csv  per-ID selection percentages, function FDR, mean
///                         number of selected functions
///   fitted_f.csv          mean estimated f over time next to the truth
///   run.json              resolved config, seeds and generator
///
/// Undefined values are written as NA. Files are replaced atomically.
/// Returns the paths written.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir, const GridResult& result,
                                                const std::string& config_ini);

}  // namespace jointseg

#endif  // JOINTSEG_REPORT_HPP
