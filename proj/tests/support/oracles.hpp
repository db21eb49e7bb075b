#ifndef JOINTSEG_TESTS_ORACLES_HPP
#define JOINTSEG_TESTS_ORACLES_HPP

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

// Reference computations written without the library's algorithms: direct
// sums, exhaustive enumeration, closed forms and 50-digit arithmetic.
namespace oracle {

using Breaks = std::vector<std::size_t>;

double mean(std::span<const double> y);

/// sum (y - mean)^2 over (i, j], computed directly.
double segment_ss(std::span<const double> y, std::size_t i, std::size_t j);

/// Visits every placement of k segments over 1..n (last entry n).
void for_each_segmentation(std::size_t n, std::size_t k, const std::function<void(const Breaks&)>& visit);

/// Minimum over all k-segmentations; `cost(i, j)` gives the segment cost and
/// is summed left to right.
struct BruteForce {
    double cost = 0.0;
    Breaks breakpoints;
};
BruteForce best_segmentation(std::size_t n, std::size_t k, const std::function<double(std::size_t, std::size_t)>& cost);

/// Exhaustive joint minimum over all allocations (k_1..k_M), sum k_m = K, each
/// series optimal for its k_m via best_segmentation. Sums series in order.
struct JointBruteForce {
    double cost = 0.0;
    std::vector<std::size_t> allocation;
};
JointBruteForce best_joint(const std::vector<std::size_t>& lengths, std::size_t K, std::size_t k_cap,
                           const std::function<double(std::size_t m, std::size_t i, std::size_t j)>& cost);

/// Per-observation segment means by direct averaging.
std::vector<double> piecewise_means(std::span<const double> y, const Breaks& bp);

/// max_j KKT violation recomputed from scratch.
double kkt_violation(const Eigen::MatrixXd& F, const Eigen::VectorXd& target, const Eigen::VectorXd& lambda,
                     const std::vector<double>& weights);

double soft_threshold(double z, double t);

/// mBIC evaluated with 50 significant digits, returned as a decimal string and a double.
struct HighPrecision {
    std::string digits;
    double value = 0.0;
};
HighPrecision mbic_50(double ss, std::size_t N, std::size_t M, const std::vector<std::size_t>& lengths);

/// Random helpers on std::mt19937_64 with explicit transforms.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : gen_(seed) {}
    double uniform(double a, double b);
    double normal();
    std::size_t integer(std::size_t lo, std::size_t hi);  // inclusive
    std::vector<double> normals(std::size_t n);

private:
    std::mt19937_64 gen_;
};

}  // namespace oracle

#endif
