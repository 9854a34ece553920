// Maximizes the combined log-likelihood over one level set
//   { beta in [0,1]^k : sum_i beta_i w_i = c }.
//
// On the level set the objective is concave (the convex -log sum(beta w)
// term is constant there), so projected gradient ascent with a backtracking
// line search converges to the global constrained maximum.

#ifndef ALPHAMAX_LEVELSET_HPP
#define ALPHAMAX_LEVELSET_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "alphamax/likelihood.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

// The all-c vector: since sum(w) = 1 it satisfies sum(beta_i w_i) = c and
// sits strictly inside the box for c in (0,1).
inline BetaVector feasible_init(const HistogramModel& model, double c) {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("c must lie in (0,1)");
    BetaVector beta;
    beta.beta.assign(model.bins(), c);
    return beta;
}

// Euclidean projection of y onto { beta : sum beta_i w_i = c } ∩ [0,1]^k.
//
// The KKT solution is beta = clip(y + lambda w, 0, 1) where the dual
// variable lambda solves sum_i w_i clip(y_i + lambda w_i, 0, 1) = c. That
// map is nondecreasing and continuous in lambda, running from 0 to sum(w),
// so lambda is found by bisection.
inline BetaVector project_to_level_set(const std::vector<double>& y, const std::vector<double>& w,
                                       double c) {
    if (y.size() != w.size()) throw std::invalid_argument("projection: length mismatch");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("projection: c must lie in (0,1)");
    double w_sum = 0.0;
    for (double wi : w) {
        if (!(wi > 0.0)) throw std::invalid_argument("projection: weights must be positive");
        w_sum += wi;
    }
    if (c >= w_sum) throw std::invalid_argument("projection: c exceeds total weight");

    const std::size_t k = y.size();
    auto clipped_mass = [&](double lambda) {
        double m = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            m += w[i] * std::clamp(y[i] + lambda * w[i], 0.0, 1.0);
        return m;
    };

    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        lo = std::min(lo, (0.0 - y[i]) / w[i]);
        hi = std::max(hi, (1.0 - y[i]) / w[i]);
    }
    // phi(lo) = 0 <= c <= w_sum = phi(hi)
    for (int iter = 0; iter < 300; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // interval exhausted in double precision
        const double m = clipped_mass(mid);
        if (std::abs(m - c) <= 1e-13) { lo = hi = mid; break; }
        if (m < c)
            lo = mid;
        else
            hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);

    BetaVector beta;
    beta.beta.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        beta.beta[i] = std::clamp(y[i] + lambda * w[i], 0.0, 1.0);
    return beta;
}

struct LevelSetSolution {
    BetaVector beta;
    double ell = 0.0;       // log-likelihood at the returned beta
    bool converged = true;
    int iterations = 0;
    double stationarity = 0.0;      // |project(beta + grad) - beta|_inf at return
    std::vector<double> ell_trace;  // objective after each accepted step
};

// Projected gradient ascent from feasible_init (or a caller-supplied
// feasible start) with backtracking line search (initial step 1, shrink 0.5,
// sufficient-increase 1e-4). Stops when the full-step projected move is
// below 1e-8 in the max norm, when the relative objective change drops below
// tol, or after max_iter iterations (the last case returns the best iterate
// with converged = false).
inline LevelSetSolution solve_level_set(const HistogramModel& model, const BinTallies& tallies,
                                        const LikelihoodWeights& weights, double c,
                                        double tol = 1e-7, int max_iter = 500,
                                        const BetaVector* init = nullptr) {
    constexpr double kArmijo = 1e-4;
    constexpr double kShrink = 0.5;
    constexpr double kMinStep = 1e-14;
    constexpr double kStationaryTol = 1e-8;

    LevelSetSolution sol;
    sol.beta = init ? *init : feasible_init(model, c);
    sol.ell = log_likelihood(model, sol.beta, tallies, weights);
    sol.ell_trace.push_back(sol.ell);
    sol.converged = false;

    for (int iter = 1; iter <= max_iter; ++iter) {
        sol.iterations = iter;
        const auto grad = gradient_on_levelset(model, sol.beta, tallies, weights);

        std::vector<double> shifted(sol.beta.beta);
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += grad[i];
        BetaVector full_step = project_to_level_set(shifted, model.w, c);

        double disp = 0.0;
        for (std::size_t i = 0; i < shifted.size(); ++i)
            disp = std::max(disp, std::abs(full_step.beta[i] - sol.beta.beta[i]));
        sol.stationarity = disp;
        if (disp <= kStationaryTol) {
            sol.converged = true;
            break;
        }

        // Backtrack along the projection arc.
        double step = 1.0;
        BetaVector candidate = std::move(full_step);
        bool accepted = false;
        while (step >= kMinStep) {
            if (step != 1.0) {
                for (std::size_t i = 0; i < shifted.size(); ++i)
                    shifted[i] = sol.beta.beta[i] + step * grad[i];
                candidate = project_to_level_set(shifted, model.w, c);
            }
            double directional = 0.0;
            for (std::size_t i = 0; i < shifted.size(); ++i)
                directional += grad[i] * (candidate.beta[i] - sol.beta.beta[i]);
            const double cand_ell = log_likelihood(model, candidate, tallies, weights);
            if (std::isfinite(cand_ell) && cand_ell >= sol.ell + kArmijo * directional) {
                const double change = cand_ell - sol.ell;
                sol.beta = std::move(candidate);
                sol.ell = cand_ell;
                sol.ell_trace.push_back(cand_ell);
                accepted = true;
                if (std::abs(change) <= tol * (1.0 + std::abs(cand_ell))) sol.converged = true;
                break;
            }
            step *= kShrink;
        }
        if (!accepted) {
            sol.converged = true;  // no ascent direction representable: stationary
            break;
        }
        if (sol.converged) break;
    }
    return sol;
}

inline LevelSetSolution solve_level_set(const HistogramModel& model, const std::vector<double>& x1,
                                        const std::vector<double>& x,
                                        const LikelihoodWeights& weights, double c,
                                        double tol = 1e-7, int max_iter = 500) {
    return solve_level_set(model, BinTallies(model, x1, x), weights, c, tol, max_iter);
}

}  // namespace alphamax

#endif  // ALPHAMAX_LEVELSET_HPP
