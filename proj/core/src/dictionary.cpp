#include "jointseg/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "jointseg/errors.hpp"

namespace jointseg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_real(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

void validate(const BasisSpec& spec) {
    std::visit(overloaded{
                   [](const HaarBasis& b) {
                       if (b.resolution < 0 || b.resolution > 30)
                           throw InvalidArgument("haar resolution must lie in 0..30");
                       if (!(b.length > 0.0)) throw InvalidArgument("haar length must be positive");
                   },
                   [](const FourierFixedBasis& b) {
                       if (b.j_max < 1) throw InvalidArgument("fourier j_max must be >= 1");
                       if (!(b.length > 0.0)) throw InvalidArgument("fourier length must be positive");
                   },
                   [](const FourierGridBasis& b) {
                       if (!(b.min_period > 0.0)) throw InvalidArgument("fourier_grid min_period must be positive");
                   },
                   [](const MonomialBasis& b) {
                       if (b.degrees.empty()) throw InvalidArgument("monomials need at least one degree");
                       std::set<int> seen;
                       for (int d : b.degrees) {
                           if (d < 1) throw InvalidArgument("monomial degrees must be positive");
                           if (!seen.insert(d).second) throw InvalidArgument("monomial degrees must be distinct");
                       }
                   },
               },
               spec.kind);
}

ColumnBlock build_haar(int resolution, double length, std::span<const double> x) {
    validate(BasisSpec{HaarBasis{resolution, length}});
    const auto bins = static_cast<std::size_t>(1) << resolution;
    const double height = std::pow(2.0, 0.5 * resolution);
    ColumnBlock block;
    block.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(bins));
    // Bin k covers u = 2^r x / L in (k, k+1]; the first bin also takes u = 0.
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = static_cast<double>(bins) * x[i] / length;
        if (u < 0.0 || u > static_cast<double>(bins)) continue;
        const auto k = u == 0.0 ? std::size_t{0} : static_cast<std::size_t>(std::ceil(u)) - 1;
        block.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = height;
    }
    block.labels.reserve(bins);
    for (std::size_t k = 0; k < bins; ++k)
        block.labels.push_back("haar[r=" + std::to_string(resolution) + ",k=" + std::to_string(k) +
                               ",L=" + fmt_real(length) + "]");
    return block;
}

ColumnBlock build_fourier_fixed(int j_max, double length, std::span<const double> x) {
    validate(BasisSpec{FourierFixedBasis{j_max, length}});
    ColumnBlock block;
    block.values.resize(static_cast<Eigen::Index>(x.size()), 2 * j_max);
    for (int j = 1; j <= j_max; ++j) {
        const double w = 2.0 * std::numbers::pi * j / length;
        for (std::size_t i = 0; i < x.size(); ++i) {
            block.values(static_cast<Eigen::Index>(i), 2 * (j - 1)) = std::sin(w * x[i]);
            block.values(static_cast<Eigen::Index>(i), 2 * (j - 1) + 1) = std::cos(w * x[i]);
        }
        const std::string arg = "[j=" + std::to_string(j) + ",L=" + fmt_real(length) + "]";
        block.labels.push_back("sin" + arg);
        block.labels.push_back("cos" + arg);
    }
    return block;
}

ColumnBlock build_fourier_grid(double min_period, std::span<const double> x) {
    validate(BasisSpec{FourierGridBasis{min_period}});
    if (x.empty()) throw InvalidArgument("fourier_grid over an empty design");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double span = *hi - *lo;
    if (!(span > 0.0)) throw InvalidArgument("fourier_grid needs a design with max(x) > min(x)");
    const auto count = static_cast<std::size_t>(std::floor(span / min_period));

    ColumnBlock block;
    block.values.resize(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(2 * count));
    for (std::size_t f = 1; f <= count; ++f) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(f) / span;
        const auto c = static_cast<Eigen::Index>(2 * (f - 1));
        for (std::size_t i = 0; i < x.size(); ++i) {
            block.values(static_cast<Eigen::Index>(i), c) = std::sin(w * x[i]);
            block.values(static_cast<Eigen::Index>(i), c + 1) = std::cos(w * x[i]);
        }
        const std::string arg = "[i=" + std::to_string(f) + ",T=" + fmt_real(span) + "]";
        block.labels.push_back("sin" + arg);
        block.labels.push_back("cos" + arg);
    }
    return block;
}

ColumnBlock build_monomials(std::span<const int> degrees, std::span<const double> x) {
    validate(BasisSpec{MonomialBasis{{degrees.begin(), degrees.end()}}});
    ColumnBlock block;
    block.values.resize(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(degrees.size()));
    for (std::size_t c = 0; c < degrees.size(); ++c) {
        for (std::size_t i = 0; i < x.size(); ++i)
            block.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = std::pow(x[i], degrees[c]);
        block.labels.push_back("x^" + std::to_string(degrees[c]));
    }
    return block;
}

ColumnBlock build_block(const BasisSpec& spec, std::span<const double> x) {
    return std::visit(overloaded{
                          [&](const HaarBasis& b) { return build_haar(b.resolution, b.length, x); },
                          [&](const FourierFixedBasis& b) { return build_fourier_fixed(b.j_max, b.length, x); },
                          [&](const FourierGridBasis& b) { return build_fourier_grid(b.min_period, x); },
                          [&](const MonomialBasis& b) { return build_monomials(b.degrees, x); },
                      },
                      spec.kind);
}

DictionaryMatrix::DictionaryMatrix(Eigen::MatrixXd values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
    if (static_cast<std::size_t>(values_.cols()) != labels_.size())
        throw StructuralError("dictionary has " + std::to_string(values_.cols()) + " columns but " +
                              std::to_string(labels_.size()) + " labels");
    if (!values_.allFinite()) throw NumericalError("dictionary contains non-finite entries");
    norms_ = values_.colwise().norm().transpose();
}

std::size_t DictionaryMatrix::active_count() const noexcept {
    return static_cast<std::size_t>((norms_.array() > 0.0).count());
}

DictionaryMatrix assemble(std::span<const BasisSpec> specs, std::span<const double> times,
                          std::span<const double> covariates) {
    if (specs.empty()) throw InvalidArgument("dictionary needs at least one basis spec");
    if (times.empty()) throw InvalidArgument("dictionary over an empty design");
    if (covariates.size() != times.size()) throw StructuralError("covariates and times differ in length");

    std::vector<ColumnBlock> blocks;
    Eigen::Index cols = 0;
    for (const auto& spec : specs) {
        blocks.push_back(build_block(spec, spec.target == EvalTarget::time ? times : covariates));
        cols += blocks.back().values.cols();
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(times.size()), cols);
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(cols));
    Eigen::Index at = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& block = blocks[b];
        values.middleCols(at, block.values.cols()) = block.values;
        at += block.values.cols();
        const std::string prefix = specs[b].target == EvalTarget::covariate ? "covariate:" : "";
        for (const auto& l : block.labels) labels.push_back(prefix + l);
    }
    return DictionaryMatrix(std::move(values), std::move(labels));
}

DictionaryMatrix assemble(std::span<const BasisSpec> specs, const SeriesSet& series) {
    const auto times = series.stacked_times();
    const auto covariates = series.stacked_covariates();
    return assemble(specs, times, covariates);
}

std::vector<BasisSpec> simulation_dictionary(double length) {
    return {
        BasisSpec{HaarBasis{7, length}},
        BasisSpec{FourierFixedBasis{10, length}},
        BasisSpec{MonomialBasis{{1, 2}}},
    };
}

std::vector<BasisSpec> gps_dictionary(double min_period) { return {BasisSpec{FourierGridBasis{min_period}}}; }

std::string describe(const BasisSpec& spec) {
    std::string s = std::visit(
        overloaded{
            [](const HaarBasis& b) {
                return "haar(resolution=" + std::to_string(b.resolution) + ", length=" + fmt_real(b.length) + ")";
            },
            [](const FourierFixedBasis& b) {
                return "fourier_fixed(j_max=" + std::to_string(b.j_max) + ", length=" + fmt_real(b.length) + ")";
            },
            [](const FourierGridBasis& b) { return "fourier_grid(min_period=" + fmt_real(b.min_period) + ")"; },
            [](const MonomialBasis& b) {
                std::string d;
                for (int x : b.degrees) d += (d.empty() ? "" : ",") + std::to_string(x);
                return "monomials(degrees=" + d + ")";
            },
        },
        spec.kind);
    return spec.target == EvalTarget::covariate ? s + " on covariate" : s;
}

}  // namespace jointseg
