#ifndef JOINTSEG_SERIES_MODEL_HPP
#define JOINTSEG_SERIES_MODEL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace jointseg {

/// One observed series: strictly increasing times, observed values and the
/// covariate the functional part is evaluated on (the times when absent).
struct Series {
    std::string id;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> covariates;

    std::size_t size() const noexcept { return values.size(); }
};

/// The M observed series, validated at construction and immutable afterwards.
///
/// Observations are stacked series by series (all of series 1, then series 2, ...);
/// every per-observation vector in the library uses this order.
class SeriesSet {
public:
    /// Throws StructuralError on empty input, length mismatches, non-increasing
    /// times or non-finite entries. Empty covariate vectors default to the times.
    explicit SeriesSet(std::vector<Series> series);

    std::size_t num_series() const noexcept { return series_.size(); }
    std::size_t total_size() const noexcept { return offsets_.back(); }

    const Series& operator[](std::size_t m) const { return series_[m]; }
    const std::vector<Series>& series() const noexcept { return series_; }

    /// Offset of the first observation of series m in the stacked order; offsets()[M] == N.
    const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
    std::vector<std::size_t> lengths() const;

    std::vector<double> stacked_values() const;
    std::vector<double> stacked_times() const;
    std::vector<double> stacked_covariates() const;

    friend bool operator==(const SeriesSet&, const SeriesSet&);

private:
    std::vector<Series> series_;
    std::vector<std::size_t> offsets_;
};

bool operator==(const Series& a, const Series& b);

/// Breakpoints of one series: the 1-based index of the last observation of each
/// segment, so segment k covers (bp[k-1], bp[k]] with an implicit bp[-1] = 0.
/// The last entry always equals the series length.
using Breakpoints = std::vector<std::size_t>;

/// Per-series breakpoints and segment means (the T mu part of the model).
struct Segmentation {
    std::vector<Breakpoints> breakpoints;
    std::vector<std::vector<double>> means;

    std::size_t num_series() const noexcept { return breakpoints.size(); }
    std::size_t total_segments() const noexcept;

    /// Breakpoints strictly inside each series (the structural endpoint dropped).
    std::vector<std::vector<std::size_t>> internal_breakpoints() const;

    friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

/// Throws StructuralError unless bps partitions 1..lengths[m] for every series.
void validate_breakpoints(std::span<const Breakpoints> bps, std::span<const std::size_t> lengths);

/// Least-squares segment means for fixed breakpoints: per-segment averages of
/// the stacked values.
Segmentation fit_means(std::span<const Breakpoints> bps, std::span<const double> stacked,
                       std::span<const std::size_t> lengths);

Segmentation fit_means(std::span<const Breakpoints> bps, const SeriesSet& series);

/// Materializes T mu as a stacked per-observation vector.
std::vector<double> segmentation_signal(const Segmentation& seg);

/// Y - T mu - bias. A null segmentation or an empty bias span stands for zero.
std::vector<double> residual(const SeriesSet& series, const Segmentation* seg,
                             std::span<const double> bias = {});

std::vector<double> residual(std::span<const double> stacked, const Segmentation* seg,
                             std::span<const double> bias = {});

/// Segment lengths of series m.
std::vector<std::size_t> segment_lengths(const Breakpoints& bp);

}  // namespace jointseg

#endif  // JOINTSEG_SERIES_MODEL_HPP
