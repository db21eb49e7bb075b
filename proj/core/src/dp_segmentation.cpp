#include "jointseg/dp_segmentation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "jointseg/errors.hpp"

namespace jointseg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CostIndex::CostIndex(std::span<const double> values) : s1_(values.size() + 1, 0.0), s2_(values.size() + 1, 0.0) {
    if (values.empty()) throw InvalidArgument("cost index over an empty sequence");
    // Centring keeps the prefix sums small; segment costs are shift invariant.
    const double ref = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i] - ref;
        s1_[i + 1] = s1_[i] + v;
        s2_[i + 1] = s2_[i] + v * v;
    }
}

DpTable::DpTable(std::size_t k_max, std::size_t n)
    : k_max_(k_max), n_(n), cost_(k_max * (n + 1), kInf), arg_(k_max * (n + 1), 0) {}

Breakpoints DpTable::backtrack(std::size_t k) const {
    if (k < 1 || k > k_max_ || k > n_)
        throw InvalidArgument("backtrack at k=" + std::to_string(k) + " outside 1.." +
                              std::to_string(std::min(k_max_, n_)));
    Breakpoints bp(k);
    std::size_t j = n_;
    for (std::size_t kk = k; kk >= 1; --kk) {
        bp[kk - 1] = j;
        j = arg_[index(kk, j)];
    }
    return bp;
}

DpTable dp_single(const CostIndex& costs, std::size_t k_max) {
    const std::size_t n = costs.size();
    if (k_max < 1 || k_max > n)
        throw InvalidArgument("k_max=" + std::to_string(k_max) + " must lie in 1.." + std::to_string(n));

    DpTable table(k_max, n);
    std::vector<double> column(n + 1);
    // Column-major sweep: every c(i, j] is evaluated once and reused for all k.
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 0; i < j; ++i) column[i] = costs.cost(i, j);
        table.cost_[table.index(1, j)] = column[0];
        table.arg_[table.index(1, j)] = 0;
        const std::size_t k_top = std::min(j, k_max);
        for (std::size_t k = 2; k <= k_top; ++k) {
            const double* prev = &table.cost_[table.index(k - 1, 0)];
            double best = kInf;
            std::size_t arg = k - 1;
            for (std::size_t i = k - 1; i < j; ++i) {
                const double v = prev[i] + column[i];
                if (v < best) {
                    best = v;
                    arg = i;
                }
            }
            table.cost_[table.index(k, j)] = best;
            table.arg_[table.index(k, j)] = arg;
        }
    }
    return table;
}

std::size_t default_k_max(std::size_t n, std::size_t K_total, std::size_t M, std::optional<std::size_t> cap) {
    std::size_t k = n;
    if (K_total >= M) k = std::min(k, K_total - M + 1);
    if (cap) k = std::min(k, *cap);
    return std::max<std::size_t>(k, 1);
}

JointSegmentation allocate_segments(std::span<const DpTable> tables, std::size_t K_total) {
    const std::size_t M = tables.size();
    if (M == 0) throw InvalidArgument("joint segmentation of zero series");
    std::size_t capacity = 0;
    for (const auto& t : tables) capacity += std::min(t.k_max(), t.size());
    if (K_total < M || K_total > capacity)
        throw InvalidArgument("K_total=" + std::to_string(K_total) + " infeasible; must lie in " +
                              std::to_string(M) + ".." + std::to_string(capacity));

    // best[m][K]: optimal cost of series 1..m using K segments; pick[m][K]: segments of series m.
    std::vector<std::vector<double>> best(M + 1, std::vector<double>(K_total + 1, kInf));
    std::vector<std::vector<std::size_t>> pick(M + 1, std::vector<std::size_t>(K_total + 1, 0));
    best[0][0] = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        const auto& t = tables[m - 1];
        const std::size_t k_cap = std::min(t.k_max(), t.size());
        for (std::size_t K = m; K <= K_total; ++K) {
            double b = kInf;
            std::size_t arg = 0;
            for (std::size_t k = 1; k <= k_cap && k <= K; ++k) {
                const double prev = best[m - 1][K - k];
                if (prev == kInf) continue;
                const double v = prev + t.cost(k, t.size());
                if (v < b) {
                    b = v;
                    arg = k;
                }
            }
            best[m][K] = b;
            pick[m][K] = arg;
        }
    }

    JointSegmentation out;
    out.cost = best[M][K_total];
    out.segments_per_series.resize(M);
    out.breakpoints.resize(M);
    std::size_t K = K_total;
    for (std::size_t m = M; m >= 1; --m) {
        const std::size_t k = pick[m][K];
        out.segments_per_series[m - 1] = k;
        out.breakpoints[m - 1] = tables[m - 1].backtrack(k);
        K -= k;
    }
    return out;
}

JointSegmentation dp_joint(std::span<const CostIndex> series_costs, std::size_t K_total,
                           std::optional<std::size_t> k_max_per_series) {
    const std::size_t M = series_costs.size();
    if (M == 0) throw InvalidArgument("joint segmentation of zero series");
    if (K_total < M)
        throw InvalidArgument("K_total=" + std::to_string(K_total) + " is smaller than the series count " +
                              std::to_string(M));
    std::vector<DpTable> tables;
    tables.reserve(M);
    for (const auto& c : series_costs)
        tables.push_back(dp_single(c, default_k_max(c.size(), K_total, M, k_max_per_series)));
    return allocate_segments(tables, K_total);
}

std::vector<DpTable> build_tables(std::span<const double> stacked, std::span<const std::size_t> lengths,
                                  std::size_t k_max) {
    std::vector<DpTable> tables;
    tables.reserve(lengths.size());
    std::size_t offset = 0;
    for (std::size_t n : lengths) {
        const CostIndex costs(stacked.subspan(offset, n));
        tables.push_back(dp_single(costs, std::max<std::size_t>(1, std::min(n, k_max))));
        offset += n;
    }
    if (offset != stacked.size()) throw StructuralError("stacked vector does not match series lengths");
    return tables;
}

}  // namespace jointseg
