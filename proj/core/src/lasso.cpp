#include "jointseg/lasso.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "jointseg/errors.hpp"

namespace jointseg {

namespace {

double soft_threshold(double z, double w) {
    if (z > w) return z - w;
    if (z < -w) return z + w;
    return 0.0;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Gap from a gradient g = F^T (target - F lambda).
double gap_from_gradient(const Eigen::VectorXd& g, const Eigen::VectorXd& lambda, const std::vector<double>& w) {
    double gap = 0.0;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        double v;
        if (lambda(j) != 0.0)
            v = std::isfinite(w[ju]) ? std::abs(g(j) - sign(lambda(j)) * w[ju]) : std::numeric_limits<double>::infinity();
        else
            v = std::isfinite(w[ju]) ? std::max(0.0, std::abs(g(j)) - w[ju]) : 0.0;
        gap = std::max(gap, v);
    }
    return gap;
}

}  // namespace

PenaltyWeights penalty_weights(double sigma, const DictionaryMatrix& dict, double gamma) {
    if (dict.size() < 2) throw InvalidArgument("penalty weights need a dictionary of at least 2 functions");
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be finite and non-negative");
    PenaltyWeights pw;
    pw.gamma = gamma;
    pw.sigma = sigma;
    const double scale = sigma * std::sqrt(gamma * std::log(static_cast<double>(dict.size())));
    pw.weights.resize(dict.size());
    for (std::size_t j = 0; j < dict.size(); ++j)
        pw.weights[j] = dict.active(j) ? scale * dict.norm(j) : std::numeric_limits<double>::infinity();
    return pw;
}

LassoSolver::LassoSolver(const DictionaryMatrix& dict)
    : dict_(&dict), gram_(dict.matrix().transpose() * dict.matrix()) {}

FunctionalFit LassoSolver::solve(const Eigen::VectorXd& target, const PenaltyWeights& weights,
                                 const LassoOptions& options, const Eigen::VectorXd* warm_start) const {
    const auto& F = dict_->matrix();
    const Eigen::Index J = F.cols();
    if (static_cast<std::size_t>(target.size()) != dict_->rows())
        throw StructuralError("lasso target has " + std::to_string(target.size()) + " entries, dictionary has " +
                              std::to_string(dict_->rows()) + " rows");
    if (weights.weights.size() != static_cast<std::size_t>(J))
        throw StructuralError("penalty weights do not match the dictionary size");
    if (!target.allFinite()) throw NumericalError("lasso target contains non-finite values");
    for (double w : weights.weights)
        if (std::isnan(w) || w < 0.0) throw NumericalError("penalty weights must be non-negative");

    const auto& w = weights.weights;
    std::vector<char> free(static_cast<std::size_t>(J));
    for (Eigen::Index j = 0; j < J; ++j)
        free[static_cast<std::size_t>(j)] = std::isfinite(w[static_cast<std::size_t>(j)]) && gram_(j, j) > 0.0;

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(J);
    if (warm_start && warm_start->size() == J)
        for (Eigen::Index j = 0; j < J; ++j)
            if (free[static_cast<std::size_t>(j)]) lambda(j) = (*warm_start)(j);

    FunctionalFit fit;
    const double tnorm = target.norm();
    const double tol = options.rel_tol * tnorm;
    const Eigen::VectorXd b = F.transpose() * target;
    Eigen::VectorXd g;

    auto update = [&](Eigen::Index j) {
        const double gjj = gram_(j, j);
        const double next = soft_threshold(g(j) + gjj * lambda(j), w[static_cast<std::size_t>(j)]) / gjj;
        const double delta = next - lambda(j);
        if (delta != 0.0) {
            g.noalias() -= gram_.col(j) * delta;
            lambda(j) = next;
        }
    };
    auto support_gap = [&]() {
        double gap = 0.0;
        for (Eigen::Index j = 0; j < J; ++j)
            if (lambda(j) != 0.0)
                gap = std::max(gap, std::abs(g(j) - sign(lambda(j)) * w[static_cast<std::size_t>(j)]));
        return gap;
    };
    // Exact solve of the stationarity equations on the current support with
    // frozen signs; accepted only if the signs survive and the gap improves.
    auto polish = [&](double current_gap) {
        std::vector<Eigen::Index> support;
        for (Eigen::Index j = 0; j < J; ++j)
            if (lambda(j) != 0.0) support.push_back(j);
        if (support.empty()) return current_gap;
        const auto s = static_cast<Eigen::Index>(support.size());
        Eigen::MatrixXd gss(s, s);
        Eigen::VectorXd rhs(s);
        for (Eigen::Index a = 0; a < s; ++a) {
            rhs(a) = b(support[a]) - sign(lambda(support[a])) * w[static_cast<std::size_t>(support[a])];
            for (Eigen::Index c = 0; c < s; ++c) gss(a, c) = gram_(support[a], support[c]);
        }
        const Eigen::VectorXd x = gss.ldlt().solve(rhs);
        if (!x.allFinite()) return current_gap;
        Eigen::VectorXd candidate = lambda;
        for (Eigen::Index a = 0; a < s; ++a) {
            if (sign(x(a)) != sign(lambda(support[a]))) return current_gap;
            candidate(support[a]) = x(a);
        }
        const Eigen::VectorXd cg = b - gram_ * candidate;
        const double cgap = gap_from_gradient(cg, candidate, w);
        if (cgap < current_gap) {
            lambda = candidate;
            g = cg;
            return cgap;
        }
        return current_gap;
    };

    if (tnorm == 0.0) lambda.setZero();
    g = b - gram_ * lambda;

    std::size_t sweeps = 0;
    std::size_t stalls = 0;
    double gap = gap_from_gradient(g, lambda, w);
    while (gap > tol && sweeps < options.max_sweeps && stalls < 50) {
        const double previous_gap = gap;
        for (Eigen::Index j = 0; j < J; ++j)
            if (free[static_cast<std::size_t>(j)]) update(j);
        ++sweeps;
        // Converge on the support before looking at the full set again.
        for (std::size_t inner = 0; inner < 1000 && sweeps < options.max_sweeps; ++inner) {
            if (support_gap() <= 0.5 * tol) break;
            for (Eigen::Index j = 0; j < J; ++j)
                if (lambda(j) != 0.0) update(j);
            ++sweeps;
        }
        g = b - gram_ * lambda;  // drop accumulated drift
        gap = gap_from_gradient(g, lambda, w);
        if (gap > tol) gap = polish(gap);
        // Rounding can floor the gap above a very tight tolerance.
        stalls = gap < 0.999 * previous_gap ? 0 : stalls + 1;
    }

    fit.fitted = F * lambda;
    fit.lambda = std::move(lambda);
    for (Eigen::Index j = 0; j < J; ++j)
        if (fit.lambda(j) != 0.0) fit.active_set.push_back(static_cast<std::size_t>(j) + 1);
    const Eigen::VectorXd resid = target - fit.fitted;
    fit.objective = resid.squaredNorm() + penalty_term(fit.lambda, weights);
    fit.kkt_gap = gap_from_gradient(F.transpose() * resid, fit.lambda, w);
    fit.sweeps = sweeps;
    fit.converged = gap <= tol;
    return fit;
}

FunctionalFit solve(const DictionaryMatrix& dict, const Eigen::VectorXd& target, const PenaltyWeights& weights,
                    const LassoOptions& options) {
    return LassoSolver(dict).solve(target, weights, options);
}

double penalty_term(const Eigen::VectorXd& lambda, const PenaltyWeights& weights) {
    double p = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
        if (lambda(j) != 0.0) p += weights.weights[static_cast<std::size_t>(j)] * std::abs(lambda(j));
    return 2.0 * p;
}

double kkt_gap(const DictionaryMatrix& dict, const Eigen::VectorXd& target, const Eigen::VectorXd& lambda,
               const PenaltyWeights& weights) {
    const Eigen::VectorXd resid = target - dict.matrix() * lambda;
    return gap_from_gradient(dict.matrix().transpose() * resid, lambda, weights.weights);
}

double penalized_objective(const DictionaryMatrix& dict, const Eigen::VectorXd& target,
                           const Eigen::VectorXd& lambda, const PenaltyWeights& weights) {
    return (target - dict.matrix() * lambda).squaredNorm() + penalty_term(lambda, weights);
}

}  // namespace jointseg
