#include "oracles.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracle {

double mean(std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

double segment_ss(std::span<const double> y, std::size_t i, std::size_t j) {
    const auto seg = y.subspan(i, j - i);
    const double mu = mean(seg);
    double s = 0.0;
    for (double v : seg) s += (v - mu) * (v - mu);
    return s;
}

namespace {

void extend(std::size_t n, std::size_t k, Breaks& prefix, const std::function<void(const Breaks&)>& visit) {
    if (prefix.size() + 1 == k) {
        prefix.push_back(n);
        visit(prefix);
        prefix.pop_back();
        return;
    }
    const std::size_t start = prefix.empty() ? 1 : prefix.back() + 1;
    const std::size_t after = k - prefix.size() - 2;  // internal breakpoints still to place after b
    for (std::size_t b = start; b + after < n; ++b) {
        prefix.push_back(b);
        extend(n, k, prefix, visit);
        prefix.pop_back();
    }
}

}  // namespace

void for_each_segmentation(std::size_t n, std::size_t k, const std::function<void(const Breaks&)>& visit) {
    if (k == 0 || k > n) return;
    Breaks prefix;
    extend(n, k, prefix, visit);
}

BruteForce best_segmentation(std::size_t n, std::size_t k,
                             const std::function<double(std::size_t, std::size_t)>& cost) {
    BruteForce best{std::numeric_limits<double>::infinity(), {}};
    for_each_segmentation(n, k, [&](const Breaks& bp) {
        double c = 0.0;
        std::size_t prev = 0;
        for (std::size_t b : bp) {
            c += cost(prev, b);
            prev = b;
        }
        if (c < best.cost) best = {c, bp};
    });
    return best;
}

JointBruteForce best_joint(const std::vector<std::size_t>& lengths, std::size_t K, std::size_t k_cap,
                           const std::function<double(std::size_t, std::size_t, std::size_t)>& cost) {
    const std::size_t M = lengths.size();
    // per-series optimum for every k
    std::vector<std::vector<double>> per(M);
    for (std::size_t m = 0; m < M; ++m) {
        const std::size_t top = std::min(lengths[m], k_cap);
        per[m].assign(top + 1, std::numeric_limits<double>::infinity());
        for (std::size_t k = 1; k <= top; ++k)
            per[m][k] = best_segmentation(lengths[m], k, [&](std::size_t i, std::size_t j) { return cost(m, i, j); }).cost;
    }
    JointBruteForce best{std::numeric_limits<double>::infinity(), {}};
    std::vector<std::size_t> alloc(M, 1);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t m, std::size_t left) {
        if (m == M) {
            if (left != 0) return;
            double c = 0.0;
            for (std::size_t s = 0; s < M; ++s) c += per[s][alloc[s]];
            if (c < best.cost) best = {c, alloc};
            return;
        }
        for (std::size_t k = 1; k < per[m].size() && k <= left; ++k) {
            alloc[m] = k;
            rec(m + 1, left - k);
        }
    };
    rec(0, K);
    return best;
}

std::vector<double> piecewise_means(std::span<const double> y, const Breaks& bp) {
    std::vector<double> out(y.size());
    std::size_t prev = 0;
    for (std::size_t b : bp) {
        const double mu = mean(y.subspan(prev, b - prev));
        for (std::size_t i = prev; i < b; ++i) out[i] = mu;
        prev = b;
    }
    return out;
}

double kkt_violation(const Eigen::MatrixXd& F, const Eigen::VectorXd& target, const Eigen::VectorXd& lambda,
                     const std::vector<double>& weights) {
    std::vector<double> resid(static_cast<std::size_t>(F.rows()));
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
        double fitted = 0.0;
        for (Eigen::Index l = 0; l < F.cols(); ++l) fitted += F(i, l) * lambda(l);
        resid[static_cast<std::size_t>(i)] = target(i) - fitted;
    }
    double worst = 0.0;
    for (Eigen::Index j = 0; j < F.cols(); ++j) {
        double g = 0.0;
        for (Eigen::Index i = 0; i < F.rows(); ++i) g += F(i, j) * resid[static_cast<std::size_t>(i)];
        const double r = weights[static_cast<std::size_t>(j)];
        double v;
        if (lambda(j) != 0.0) {
            v = std::isinf(r) ? std::numeric_limits<double>::infinity() : std::abs(g - std::copysign(r, lambda(j)));
        } else {
            v = std::isinf(r) ? 0.0 : std::max(0.0, std::abs(g) - r);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

HighPrecision mbic_50(double ss, std::size_t N, std::size_t M, const std::vector<std::size_t>& lengths) {
    using boost::multiprecision::cpp_dec_float_50;
    const std::size_t K = lengths.size();
    const cpp_dec_float_50 a = cpp_dec_float_50(N - K + 1) / 2;
    const cpp_dec_float_50 dof = cpp_dec_float_50(1) / 2 - (cpp_dec_float_50(K) - cpp_dec_float_50(M));
    cpp_dec_float_50 lengths_term = 0;
    for (std::size_t l : lengths) lengths_term += log(cpp_dec_float_50(l));
    const cpp_dec_float_50 v = boost::math::lgamma(a) - a * log(cpp_dec_float_50(ss)) +
                               dof * log(cpp_dec_float_50(N)) - lengths_term / 2;
    return {v.str(50), v.convert_to<double>()};
}

double Draw::uniform(double a, double b) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
}

double Draw::normal() {
    // Box-Muller on two uniforms in (0, 1]
    const double u1 = 1.0 - uniform(0.0, 1.0);
    const double u2 = uniform(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Draw::integer(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform(0.0, 1.0) * static_cast<double>(hi - lo + 1));
}

std::vector<double> Draw::normals(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
}

}  // namespace oracle
