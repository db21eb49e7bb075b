#ifndef JOINTSEG_LASSO_HPP
#define JOINTSEG_LASSO_HPP

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "jointseg/dictionary.hpp"

namespace jointseg {

/// Per-column l1 weights r_j = sigma * ||phi_j|| * sqrt(gamma * log J).
/// Zero-norm columns get +infinity: their coefficient is pinned at zero.
struct PenaltyWeights {
    double gamma = 2.1;
    double sigma = 0.0;
    std::vector<double> weights;
};

/// Throws InvalidArgument for J < 2, gamma <= 0 or sigma < 0.
PenaltyWeights penalty_weights(double sigma, const DictionaryMatrix& dict, double gamma);

struct LassoOptions {
    /// Stop once the KKT gap is at most rel_tol * ||target||.
    double rel_tol = 1e-8;
    std::size_t max_sweeps = 100000;
};

struct FunctionalFit {
    Eigen::VectorXd lambda;
    std::vector<std::size_t> active_set;  // 1-based dictionary IDs with lambda != 0
    Eigen::VectorXd fitted;               // F lambda
    double objective = 0.0;               // ||target - F lambda||^2 + 2 sum r_j |lambda_j|
    double kkt_gap = 0.0;
    std::size_t sweeps = 0;
    bool converged = true;
};

/// Weighted-l1 least squares  min ||target - F lambda||^2 + 2 sum_j r_j |lambda_j|
/// by cyclic coordinate descent on the Gram matrix with active-set sweeps,
/// finished by an exact solve on the detected support.
///
/// The Gram matrix is computed once per solver, so reuse one instance when the
/// same dictionary is fitted against many targets. Holds a reference to `dict`.
class LassoSolver {
public:
    explicit LassoSolver(const DictionaryMatrix& dict);

    const DictionaryMatrix& dictionary() const noexcept { return *dict_; }

    /// `warm_start` (optional) seeds the coordinate descent; the optimum reached
    /// does not depend on it up to the tolerance. Throws NumericalError on
    /// non-finite input and StructuralError on shape mismatch.
    FunctionalFit solve(const Eigen::VectorXd& target, const PenaltyWeights& weights,
                        const LassoOptions& options = {}, const Eigen::VectorXd* warm_start = nullptr) const;

private:
    const DictionaryMatrix* dict_;
    Eigen::MatrixXd gram_;
};

FunctionalFit solve(const DictionaryMatrix& dict, const Eigen::VectorXd& target, const PenaltyWeights& weights,
                    const LassoOptions& options = {});

/// Largest violation of the optimality conditions at lambda:
/// |g_j - sign(lambda_j) r_j| on the support, max(0, |g_j| - r_j) off it, with
/// g = F^T (target - F lambda). Pinned columns count only when lambda_j != 0.
double kkt_gap(const DictionaryMatrix& dict, const Eigen::VectorXd& target, const Eigen::VectorXd& lambda,
               const PenaltyWeights& weights);

double penalized_objective(const DictionaryMatrix& dict, const Eigen::VectorXd& target,
                           const Eigen::VectorXd& lambda, const PenaltyWeights& weights);

/// 2 sum_j r_j |lambda_j| (zero-coefficient pinned columns contribute nothing).
double penalty_term(const Eigen::VectorXd& lambda, const PenaltyWeights& weights);

}  // namespace jointseg

#endif  // JOINTSEG_LASSO_HPP
