#include "jointseg/series_model.hpp"

#include <cmath>
#include <numeric>

#include "jointseg/errors.hpp"

namespace jointseg {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

SeriesSet::SeriesSet(std::vector<Series> series) : series_(std::move(series)) {
    if (series_.empty()) throw StructuralError("a series set needs at least one series");
    offsets_.reserve(series_.size() + 1);
    offsets_.push_back(0);
    for (auto& s : series_) {
        const std::size_t n = s.values.size();
        if (n == 0) throw StructuralError("series '" + s.id + "' is empty");
        if (s.times.size() != n)
            throw StructuralError("series '" + s.id + "': times and values differ in length");
        if (s.covariates.empty()) s.covariates = s.times;
        if (s.covariates.size() != n)
            throw StructuralError("series '" + s.id + "': covariates and values differ in length");
        if (!all_finite(s.values) || !all_finite(s.times) || !all_finite(s.covariates))
            throw StructuralError("series '" + s.id + "' contains non-finite entries");
        for (std::size_t i = 1; i < n; ++i)
            if (!(s.times[i] > s.times[i - 1]))
                throw StructuralError("series '" + s.id + "': times not strictly increasing at index " +
                                      std::to_string(i + 1));
        offsets_.push_back(offsets_.back() + n);
    }
}

std::vector<std::size_t> SeriesSet::lengths() const {
    std::vector<std::size_t> out;
    out.reserve(series_.size());
    for (const auto& s : series_) out.push_back(s.size());
    return out;
}

std::vector<double> SeriesSet::stacked_values() const {
    std::vector<double> out;
    out.reserve(total_size());
    for (const auto& s : series_) out.insert(out.end(), s.values.begin(), s.values.end());
    return out;
}

std::vector<double> SeriesSet::stacked_times() const {
    std::vector<double> out;
    out.reserve(total_size());
    for (const auto& s : series_) out.insert(out.end(), s.times.begin(), s.times.end());
    return out;
}

std::vector<double> SeriesSet::stacked_covariates() const {
    std::vector<double> out;
    out.reserve(total_size());
    for (const auto& s : series_) out.insert(out.end(), s.covariates.begin(), s.covariates.end());
    return out;
}

bool operator==(const Series& a, const Series& b) {
    return a.id == b.id && a.times == b.times && a.values == b.values && a.covariates == b.covariates;
}

bool operator==(const SeriesSet& a, const SeriesSet& b) { return a.series_ == b.series_; }

std::size_t Segmentation::total_segments() const noexcept {
    std::size_t k = 0;
    for (const auto& bp : breakpoints) k += bp.size();
    return k;
}

std::vector<std::vector<std::size_t>> Segmentation::internal_breakpoints() const {
    std::vector<std::vector<std::size_t>> out;
    out.reserve(breakpoints.size());
    for (const auto& bp : breakpoints) out.emplace_back(bp.begin(), bp.end() - (bp.empty() ? 0 : 1));
    return out;
}

void validate_breakpoints(std::span<const Breakpoints> bps, std::span<const std::size_t> lengths) {
    if (bps.size() != lengths.size())
        throw StructuralError("breakpoints given for " + std::to_string(bps.size()) + " series, expected " +
                              std::to_string(lengths.size()));
    for (std::size_t m = 0; m < bps.size(); ++m) {
        const auto& bp = bps[m];
        if (bp.empty()) throw StructuralError("series " + std::to_string(m + 1) + " has no segments");
        std::size_t prev = 0;
        for (std::size_t b : bp) {
            if (b <= prev)
                throw StructuralError("series " + std::to_string(m + 1) + ": breakpoints not strictly increasing");
            prev = b;
        }
        if (bp.back() != lengths[m])
            throw StructuralError("series " + std::to_string(m + 1) + ": last breakpoint " +
                                  std::to_string(bp.back()) + " != length " + std::to_string(lengths[m]));
    }
}

Segmentation fit_means(std::span<const Breakpoints> bps, std::span<const double> stacked,
                       std::span<const std::size_t> lengths) {
    validate_breakpoints(bps, lengths);
    const std::size_t total = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
    if (stacked.size() != total)
        throw StructuralError("residual has " + std::to_string(stacked.size()) + " entries, expected " +
                              std::to_string(total));

    Segmentation seg;
    seg.breakpoints.assign(bps.begin(), bps.end());
    seg.means.resize(bps.size());
    std::size_t offset = 0;
    for (std::size_t m = 0; m < bps.size(); ++m) {
        std::size_t start = 0;
        for (std::size_t end : bps[m]) {
            // deviations from the first value: exact on constant segments
            const double pivot = stacked[offset + start];
            double sum = 0.0;
            for (std::size_t i = start; i < end; ++i) sum += stacked[offset + i] - pivot;
            seg.means[m].push_back(pivot + sum / static_cast<double>(end - start));
            start = end;
        }
        offset += lengths[m];
    }
    return seg;
}

Segmentation fit_means(std::span<const Breakpoints> bps, const SeriesSet& series) {
    const auto values = series.stacked_values();
    const auto lengths = series.lengths();
    return fit_means(bps, values, lengths);
}

std::vector<double> segmentation_signal(const Segmentation& seg) {
    std::vector<double> out;
    for (std::size_t m = 0; m < seg.breakpoints.size(); ++m) {
        const auto& bp = seg.breakpoints[m];
        if (seg.means[m].size() != bp.size())
            throw StructuralError("series " + std::to_string(m + 1) + ": means and segments differ in count");
        std::size_t start = 0;
        for (std::size_t k = 0; k < bp.size(); ++k) {
            out.insert(out.end(), bp[k] - start, seg.means[m][k]);
            start = bp[k];
        }
    }
    return out;
}

std::vector<double> residual(std::span<const double> stacked, const Segmentation* seg,
                             std::span<const double> bias) {
    std::vector<double> out(stacked.begin(), stacked.end());
    if (seg) {
        const auto signal = segmentation_signal(*seg);
        if (signal.size() != out.size())
            throw StructuralError("segmentation covers " + std::to_string(signal.size()) +
                                  " observations, expected " + std::to_string(out.size()));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= signal[i];
    }
    if (!bias.empty()) {
        if (bias.size() != out.size())
            throw StructuralError("bias has " + std::to_string(bias.size()) + " entries, expected " +
                                  std::to_string(out.size()));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bias[i];
    }
    return out;
}

std::vector<double> residual(const SeriesSet& series, const Segmentation* seg, std::span<const double> bias) {
    const auto values = series.stacked_values();
    return residual(values, seg, bias);
}

std::vector<std::size_t> segment_lengths(const Breakpoints& bp) {
    std::vector<std::size_t> out;
    out.reserve(bp.size());
    std::size_t prev = 0;
    for (std::size_t b : bp) {
        out.push_back(b - prev);
        prev = b;
    }
    return out;
}

}  // namespace jointseg
