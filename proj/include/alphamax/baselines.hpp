// Closed-form baseline estimators: the pdf-ratio and cdf-based estimators
// built on the characterization alpha* = inf f/f1, and a two-component
// Gaussian mixture fit by expectation-maximization.

#ifndef ALPHAMAX_BASELINES_HPP
#define ALPHAMAX_BASELINES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "alphamax/density.hpp"
#include "alphamax/rng.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

// alpha_hat = min over component-sample points of f_hat(x) / f1_hat(x),
// clamped into (0,1]. Smoothing keeps both histogram densities strictly
// positive, so the ratio is always defined.
inline PriorEstimate pdf_ratio_estimate(const HistogramModel& model, const std::vector<double>& x1) {
    if (x1.empty()) throw std::invalid_argument("component sample is empty");
    double best = std::numeric_limits<double>::infinity();
    for (double v : x1) {
        const double f1 = pdf_component(model, v);
        if (f1 <= 0.0) continue;  // cannot happen for points inside the support
        best = std::min(best, pdf_mixture(model, v) / f1);
    }
    PriorEstimate estimate;
    estimate.method = "pdf-ratio";
    estimate.alpha_hat = std::min(best, 1.0);
    return estimate;
}

// Largest grid alpha for which F_hat - alpha * F1_hat, evaluated at the
// sorted component-sample points, is nonnegative with nonnegative first
// finite differences. The differences are taken between consecutive
// evaluation points at which F_hat actually changes: a run of component
// points squeezed between two mixture observations says nothing about the
// local slope of F, and differencing inside such a run would veto every
// positive alpha. Both conditions tighten as alpha grows, so the feasible
// set is a down-set and binary search over the grid applies.
inline PriorEstimate cdf_based_estimate(const std::vector<double>& x, const std::vector<double>& x1,
                                        double grid_step = 0.001) {
    if (x.empty() || x1.empty()) throw std::invalid_argument("samples must be non-empty");
    if (grid_step <= 0.0 || grid_step > 1.0) throw std::invalid_argument("grid step must be in (0,1]");

    std::vector<double> points(x1);
    std::sort(points.begin(), points.end());
    const std::vector<double> F = ecdf_eval(x, points);
    const std::vector<double> F1 = ecdf_eval(x1, points);

    // last index of each run of equal F values
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (i + 1 == points.size() || F[i + 1] != F[i]) sites.push_back(i);

    auto feasible = [&](double alpha) {
        for (std::size_t i = 0; i < points.size(); ++i)
            if (F[i] - alpha * F1[i] < -1e-12) return false;
        for (std::size_t s = 1; s < sites.size(); ++s) {
            const double dF = F[sites[s]] - F[sites[s - 1]];
            const double dF1 = F1[sites[s]] - F1[sites[s - 1]];
            if (dF - alpha * dF1 < -1e-12) return false;
        }
        return true;
    };

    const int n_grid = static_cast<int>(std::round(1.0 / grid_step));
    PriorEstimate estimate;
    estimate.method = "cdf-based";

    if (!feasible(grid_step)) {
        estimate.alpha_hat = grid_step;
        estimate.low_confidence = true;
        estimate.warnings.push_back("no feasible alpha on the grid; returning the smallest value");
        return estimate;
    }
    int lo = 1, hi = n_grid;  // grid index i corresponds to alpha = i * grid_step
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (feasible(mid * grid_step))
            lo = mid;
        else
            hi = mid - 1;
    }
    // The search relies on feasibility being a down-set in alpha; verify the
    // boundary it found actually is one.
    if (!feasible(lo * grid_step) || (lo < n_grid && feasible((lo + 1) * grid_step)))
        throw std::logic_error("cdf-based estimator: feasible set is not a down-set");
    estimate.alpha_hat = lo * grid_step;
    return estimate;
}

// Diagnostics of one EM run.
struct GmmFit {
    double weight0 = 0.5, mean0 = 0.0, var0 = 1.0;
    double weight1 = 0.5, mean1 = 0.0, var1 = 1.0;
    std::vector<double> log_likelihoods;  // one entry per iteration
    bool degenerate = false;
};

namespace detail {

inline double normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(6.283185307179586 * var);
}

inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * (sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - i;
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

inline GmmFit run_em(const std::vector<double>& x, double mean0, double mean1, double var_init,
                     double var_floor, double tol, int max_iter) {
    GmmFit fit;
    fit.mean0 = mean0;
    fit.mean1 = mean1;
    fit.var0 = fit.var1 = var_init;
    fit.weight0 = fit.weight1 = 0.5;

    const std::size_t n = x.size();
    std::vector<double> resp(n);  // responsibility of component 1
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < max_iter; ++iter) {
        double ll = 0.0;
        double sum_r = 0.0, sum_rx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p0 = fit.weight0 * normal_pdf(x[i], fit.mean0, fit.var0);
            const double p1 = fit.weight1 * normal_pdf(x[i], fit.mean1, fit.var1);
            const double total = p0 + p1;
            if (total <= 0.0 || !std::isfinite(total)) {
                fit.degenerate = true;
                return fit;
            }
            resp[i] = p1 / total;
            ll += std::log(total);
            sum_r += resp[i];
            sum_rx += resp[i] * x[i];
        }
        fit.log_likelihoods.push_back(ll);

        const double n1 = sum_r, n0 = n - sum_r;
        if (n1 < 1e-10 || n0 < 1e-10) {
            fit.degenerate = true;
            return fit;
        }
        const double new_mean1 = sum_rx / n1;
        double sum_x = 0.0;
        for (double v : x) sum_x += v;
        const double new_mean0 = (sum_x - sum_rx) / n0;
        double v1 = 0.0, v0 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d1 = x[i] - new_mean1, d0 = x[i] - new_mean0;
            v1 += resp[i] * d1 * d1;
            v0 += (1.0 - resp[i]) * d0 * d0;
        }
        fit.mean1 = new_mean1;
        fit.mean0 = new_mean0;
        fit.var1 = std::max(v1 / n1, var_floor);
        fit.var0 = std::max(v0 / n0, var_floor);
        fit.weight1 = n1 / n;
        fit.weight0 = n0 / n;

        if (iter > 0 && std::abs(ll - prev_ll) <= tol * (1.0 + std::abs(ll))) break;
        prev_ll = ll;
    }
    return fit;
}

}  // namespace detail

// Fits a two-component univariate Gaussian mixture to the mixture sample by
// EM and reads off the weight of the component whose mean lies closer to
// mean(x1). Initial means sit at the 25th/75th percentiles of x; restarts
// jitter them by +-0.5 stddev. Best of `restarts` runs by final likelihood.
inline PriorEstimate gmm_em_estimate(const std::vector<double>& x, const std::vector<double>& x1,
                                     int restarts = 5, double tol = 1e-8, int max_iter = 1000,
                                     std::uint64_t seed = 0, GmmFit* fit_out = nullptr) {
    if (x.size() < 4) throw std::invalid_argument("gmm needs at least 4 mixture points");
    if (x1.empty()) throw std::invalid_argument("component sample is empty");

    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    const double q25 = detail::quantile_sorted(sorted, 0.25);
    const double q75 = detail::quantile_sorted(sorted, 0.75);

    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double var_x = 0.0;
    for (double v : x) var_x += (v - mean_x) * (v - mean_x);
    var_x /= x.size();
    if (var_x <= 0.0) throw std::invalid_argument("mixture sample has zero variance");
    const double sd_x = std::sqrt(var_x);
    const double var_floor = 1e-6 * var_x;

    Rng rng(derive_seed(seed, 0x676d6dULL));
    GmmFit best;
    bool have_fit = false;
    for (int r = 0; r < restarts; ++r) {
        double m0 = q25, m1 = q75;
        if (r > 0) {
            m0 += rng.uniform(-0.5, 0.5) * sd_x;
            m1 += rng.uniform(-0.5, 0.5) * sd_x;
        }
        GmmFit fit = detail::run_em(x, m0, m1, var_x, var_floor, tol, max_iter);
        if (fit.degenerate) continue;
        if (!have_fit || fit.log_likelihoods.back() > best.log_likelihoods.back()) {
            best = std::move(fit);
            have_fit = true;
        }
    }
    if (!have_fit) throw std::runtime_error("gmm: every EM restart collapsed");

    const double mean_x1 = std::accumulate(x1.begin(), x1.end(), 0.0) / x1.size();
    const double d0 = std::abs(best.mean0 - mean_x1);
    const double d1 = std::abs(best.mean1 - mean_x1);

    PriorEstimate estimate;
    estimate.method = "gmm";
    if (d1 < d0)
        estimate.alpha_hat = best.weight1;
    else if (d0 < d1)
        estimate.alpha_hat = best.weight0;
    else
        estimate.alpha_hat = std::max(best.weight0, best.weight1);  // tie: larger weight
    if (fit_out) *fit_out = best;
    return estimate;
}

}  // namespace alphamax

#endif  // ALPHAMAX_BASELINES_HPP
