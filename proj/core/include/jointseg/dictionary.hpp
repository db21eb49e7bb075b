#ifndef JOINTSEG_DICTIONARY_HPP
#define JOINTSEG_DICTIONARY_HPP

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jointseg/series_model.hpp"

namespace jointseg {

/// Piecewise-constant spikes at resolution r on [0, length]: 2^r bins, each of
/// height 2^{r/2}.
struct HaarBasis {
    int resolution = 0;
    double length = 1.0;
};

/// sin(2 pi j x / length), cos(2 pi j x / length) for j = 1..j_max, interleaved.
struct FourierFixedBasis {
    int j_max = 1;
    double length = 1.0;
};

/// Sine/cosine pairs at frequencies i / T, T = max(x) - min(x), for every
/// period T / i not shorter than min_period.
struct FourierGridBasis {
    double min_period = 1.0;
};

/// x^d for each listed degree.
struct MonomialBasis {
    std::vector<int> degrees;
};

enum class EvalTarget { time, covariate };

struct BasisSpec {
    std::variant<HaarBasis, FourierFixedBasis, FourierGridBasis, MonomialBasis> kind;
    EvalTarget target = EvalTarget::time;
};

/// Throws InvalidArgument for out-of-range parameters.
void validate(const BasisSpec& spec);

/// Evaluated columns of one basis family.
struct ColumnBlock {
    Eigen::MatrixXd values;  // rows = sample points
    std::vector<std::string> labels;
};

ColumnBlock build_haar(int resolution, double length, std::span<const double> x);
ColumnBlock build_fourier_fixed(int j_max, double length, std::span<const double> x);
ColumnBlock build_fourier_grid(double min_period, std::span<const double> x);
ColumnBlock build_monomials(std::span<const int> degrees, std::span<const double> x);

ColumnBlock build_block(const BasisSpec& spec, std::span<const double> x);

/// The N x J matrix F of a dictionary evaluated on the stacked design.
///
/// Column j (0-based) carries the 1-based ID j + 1. Columns that vanish on the
/// sample are kept so IDs stay stable, but are flagged inactive.
class DictionaryMatrix {
public:
    DictionaryMatrix(Eigen::MatrixXd values, std::vector<std::string> labels);

    const Eigen::MatrixXd& matrix() const noexcept { return values_; }
    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t size() const noexcept { return labels_.size(); }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t j) const { return labels_.at(j); }
    const Eigen::VectorXd& norms() const noexcept { return norms_; }
    double norm(std::size_t j) const { return norms_(static_cast<Eigen::Index>(j)); }
    bool active(std::size_t j) const { return norms_(static_cast<Eigen::Index>(j)) > 0.0; }
    std::size_t active_count() const noexcept;

    Eigen::VectorXd apply(const Eigen::VectorXd& lambda) const { return values_ * lambda; }

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> labels_;
    Eigen::VectorXd norms_;
};

/// Stacks the columns of every spec, evaluated on the concatenated design of
/// all series (times or covariates per spec target).
DictionaryMatrix assemble(std::span<const BasisSpec> specs, const SeriesSet& series);

/// Same, on an explicit design vector; covariate-target specs use `covariates`.
DictionaryMatrix assemble(std::span<const BasisSpec> specs, std::span<const double> times,
                          std::span<const double> covariates);

/// Haar r=7 + Fourier j<=10 on period 100 + monomials {1,2}: the 150-function
/// dictionary of the simulation design, for series of length `length`.
std::vector<BasisSpec> simulation_dictionary(double length = 100.0);

/// Fourier grid with periods of at least `min_period` time units (8 weeks for
/// weekly GPS coordinate series).
std::vector<BasisSpec> gps_dictionary(double min_period = 8.0);

std::string describe(const BasisSpec& spec);

}  // namespace jointseg

#endif  // JOINTSEG_DICTIONARY_HPP
