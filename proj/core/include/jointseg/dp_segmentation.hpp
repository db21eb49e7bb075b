#ifndef JOINTSEG_DP_SEGMENTATION_HPP
#define JOINTSEG_DP_SEGMENTATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jointseg/series_model.hpp"

namespace jointseg {

/// O(1) within-segment sum of squares c(i, j] = sum_{i<l<=j} (y_l - mean)^2
/// through prefix sums of the centred values.
class CostIndex {
public:
    explicit CostIndex(std::span<const double> values);

    std::size_t size() const noexcept { return s1_.size() - 1; }

    /// 0 <= i < j <= size(). Clamped at zero; exactly zero for one-point segments.
    double cost(std::size_t i, std::size_t j) const noexcept {
        if (j - i == 1) return 0.0;
        const double d1 = s1_[j] - s1_[i];
        const double c = (s2_[j] - s2_[i]) - d1 * d1 / static_cast<double>(j - i);
        return c > 0.0 ? c : 0.0;
    }

private:
    std::vector<double> s1_;
    std::vector<double> s2_;
};

/// Optimal costs of segmenting the prefix 1..j into k segments, k = 1..k_max.
class DpTable {
public:
    DpTable(std::size_t k_max, std::size_t n);

    std::size_t k_max() const noexcept { return k_max_; }
    std::size_t size() const noexcept { return n_; }

    /// +infinity when j < k.
    double cost(std::size_t k, std::size_t j) const noexcept { return cost_[index(k, j)]; }
    /// Start boundary i of the last segment (i, j] in the optimal k-segmentation of 1..j.
    std::size_t last_start(std::size_t k, std::size_t j) const noexcept { return arg_[index(k, j)]; }

    /// Optimal breakpoints of the whole series into k segments.
    Breakpoints backtrack(std::size_t k) const;

private:
    friend DpTable dp_single(const CostIndex&, std::size_t);

    std::size_t index(std::size_t k, std::size_t j) const noexcept { return (k - 1) * (n_ + 1) + j; }

    std::size_t k_max_;
    std::size_t n_;
    std::vector<double> cost_;
    std::vector<std::size_t> arg_;
};

/// Segment-neighbourhood dynamic programme for one series. Ties resolve to the
/// smallest start of the last segment. Throws InvalidArgument unless 1 <= k_max <= n.
DpTable dp_single(const CostIndex& costs, std::size_t k_max);

struct JointSegmentation {
    std::vector<Breakpoints> breakpoints;
    std::vector<std::size_t> segments_per_series;
    double cost = 0.0;
};

/// Largest per-series segment count compatible with K_total when every other
/// series keeps one segment, optionally capped.
std::size_t default_k_max(std::size_t n, std::size_t K_total, std::size_t M,
                          std::optional<std::size_t> cap = std::nullopt);

/// Second stage: distributes K_total segments over the series given their
/// stage-one tables, minimizing the summed cost. Ties favour fewer segments in
/// later series. Throws InvalidArgument when K_total is infeasible.
JointSegmentation allocate_segments(std::span<const DpTable> tables, std::size_t K_total);

/// Both stages. k_max_per_series caps the stage-one depth; the default is
/// default_k_max for each series.
JointSegmentation dp_joint(std::span<const CostIndex> series_costs, std::size_t K_total,
                           std::optional<std::size_t> k_max_per_series = std::nullopt);

/// Stage-one tables of every series of a stacked vector, depth min(n_m, k_max).
std::vector<DpTable> build_tables(std::span<const double> stacked, std::span<const std::size_t> lengths,
                                  std::size_t k_max);

}  // namespace jointseg

#endif  // JOINTSEG_DP_SEGMENTATION_HPP
