// The level-set estimator end to end: profile log-likelihood over the c
// grid, monotone correction, median smoothing, [0,1] normalization, and
// slope-difference knee detection.

#ifndef ALPHAMAX_ALPHAMAX_HPP
#define ALPHAMAX_ALPHAMAX_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "alphamax/density.hpp"
#include "alphamax/levelset.hpp"
#include "alphamax/parallel.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

// The monotone correction ell(j) <- max_{m >= j} ell(m): the running
// maximum from the right, the minimal change making the curve
// non-increasing.
inline std::vector<double> monotone_correct(const std::vector<double>& ells) {
    std::vector<double> out(ells.size());
    double running = -std::numeric_limits<double>::infinity();
    for (std::size_t j = ells.size(); j-- > 0;) {
        running = std::max(running, ells[j]);
        out[j] = running;
    }
    return out;
}

// Solves every grid level set and applies the monotone correction. The
// theory says the profile likelihood is non-increasing in c; the running
// maximum repairs the occasional unstable solve near c ~ 0.
inline LevelSetCurve compute_curve(const HistogramModel& model, const BinTallies& tallies,
                                   const LikelihoodWeights& weights, const AlphaMaxConfig& config) {
    LevelSetCurve curve;
    curve.cs = config.grid();
    const std::size_t n = curve.cs.size();
    curve.ells_raw.assign(n, 0.0);
    curve.betas.emplace(n);
    std::vector<std::uint8_t> unconverged(n, 0);

    parallel_for_index(n, config.jobs, [&](std::size_t j) {
        auto sol = solve_level_set(model, tallies, weights, curve.cs[j], config.solver_tol,
                                   config.solver_max_iter);
        curve.ells_raw[j] = sol.ell;
        (*curve.betas)[j] = std::move(sol.beta);
        unconverged[j] = sol.converged ? 0 : 1;
    });

    for (std::size_t j = 0; j < n; ++j)
        if (unconverged[j])
            curve.warnings.push_back("level-set solve at c=" + std::to_string(curve.cs[j]) +
                                     " hit the iteration limit");

    curve.ells = monotone_correct(curve.ells_raw);
    return curve;
}

inline LevelSetCurve compute_curve(const HistogramModel& model, const std::vector<double>& x1,
                                   const std::vector<double>& x, const AlphaMaxConfig& config) {
    const LikelihoodWeights weights =
        config.weights ? *config.weights : LikelihoodWeights::per_sample(x.size(), x1.size());
    return compute_curve(model, BinTallies(model, x1, x), weights, config);
}

// Median filter with window j-k..j+k; the first and last k entries are
// copied through unchanged.
inline std::vector<double> median_smooth(const std::vector<double>& ells, int k) {
    if (k < 0) throw std::invalid_argument("smoothing half-width must be nonnegative");
    const std::size_t n = ells.size();
    if (k == 0) return ells;
    if (2 * static_cast<std::size_t>(k) + 1 > n)
        throw std::invalid_argument("smoothing window exceeds curve length");

    std::vector<double> out(ells);
    std::vector<double> window;
    for (std::size_t j = k; j + k < n; ++j) {
        window.assign(ells.begin() + (j - k), ells.begin() + (j + k + 1));
        std::nth_element(window.begin(), window.begin() + k, window.end());
        out[j] = window[k];
    }
    return out;
}

// Affine rescale to [0,1]. A flat curve has no knee; it maps to all 0.5 and
// *flat is set so callers can flag the estimate.
inline std::vector<double> normalize01(const std::vector<double>& ells, bool* flat = nullptr) {
    if (ells.empty()) throw std::invalid_argument("cannot normalize an empty curve");
    const auto [min_it, max_it] = std::minmax_element(ells.begin(), ells.end());
    if (flat) *flat = false;
    if (*max_it == *min_it) {
        if (flat) *flat = true;
        return std::vector<double>(ells.size(), 0.5);
    }
    std::vector<double> out;
    out.reserve(ells.size());
    for (double v : ells) out.push_back((v - *min_it) / (*max_it - *min_it));
    return out;
}

namespace detail {

// Ordinary least-squares slope of (xs[i], ys[i]) over [first, last].
inline double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                        std::size_t first, std::size_t last) {
    const std::size_t m = last - first + 1;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= m;
    mean_y /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    }
    return sxy / sxx;
}

}  // namespace detail

struct KneeResult {
    double alpha_hat = 0.0;
    std::size_t index = 0;  // index into cs
    std::vector<std::pair<double, double>> trace;  // (c_j, heuristic_j)
    bool at_boundary = false;
};

// Slope-difference knee detection on the normalized curve. For each j with
// a full window on both sides, fit a line over the `win` points before and
// after, take the slope drop, and divide by 1 - ell + epsilon so knees near
// the top of the curve win over equally sharp knees further down. Ties in
// the argmax break toward the smallest index (the smaller alpha).
inline KneeResult detect_knee(const std::vector<double>& cs, const std::vector<double>& ells,
                              int win, double epsilon) {
    const std::size_t n = cs.size();
    if (ells.size() != n) throw std::invalid_argument("curve length mismatch");
    if (win <= 0) throw std::invalid_argument("win must be positive");
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    if (2 * static_cast<std::size_t>(win) + 1 > n)
        throw std::invalid_argument("slope window exceeds curve length");

    const auto [min_it, max_it] = std::minmax_element(ells.begin(), ells.end());
    if (*min_it == *max_it) throw std::runtime_error("no knee detected: curve is flat");

    KneeResult result;
    double best = -std::numeric_limits<double>::infinity();
    const std::size_t first = static_cast<std::size_t>(win);
    const std::size_t last = n - 1 - static_cast<std::size_t>(win);
    for (std::size_t j = first; j <= last; ++j) {
        const double slope_before = detail::ols_slope(cs, ells, j - win, j);
        const double slope_after = detail::ols_slope(cs, ells, j, j + win);
        const double heuristic = (slope_before - slope_after) / (1.0 - ells[j] + epsilon);
        result.trace.emplace_back(cs[j], heuristic);
        if (heuristic > best) {
            best = heuristic;
            result.index = j;
        }
    }
    // A curvature-free curve leaves only rounding noise in the slope
    // differences (a real knee on a normalized curve scores far above this
    // floor). Fall back to the smallest eligible grid point and flag it.
    if (best <= 1e-9) {
        result.index = first;
        result.at_boundary = true;
    } else {
        result.at_boundary = result.index == first || result.index == last;
    }
    result.alpha_hat = cs[result.index];
    return result;
}

inline KneeResult detect_knee(const LevelSetCurve& curve, int win, double epsilon) {
    return detect_knee(curve.cs, curve.ells_normalized, win, epsilon);
}

// Full pipeline over univariate samples.
inline PriorEstimate estimate_alphamax_univariate(const std::vector<double>& x1,
                                                  const std::vector<double>& x,
                                                  const AlphaMaxConfig& config) {
    config.check();
    const HistogramModel model = build_histogram(x1, x, config.pseudocount);
    const BinTallies tallies = BinTallies::from_model(model);
    const LikelihoodWeights weights =
        config.weights ? *config.weights : LikelihoodWeights::per_sample(x.size(), x1.size());

    LevelSetCurve curve = compute_curve(model, tallies, weights, config);
    curve.ells_smoothed = median_smooth(curve.ells, config.smooth_k);
    bool flat = false;
    curve.ells_normalized = normalize01(curve.ells_smoothed, &flat);

    PriorEstimate estimate;
    estimate.method = "alphamax";
    if (flat) throw std::runtime_error("no knee detected: curve is flat");
    const KneeResult knee = detect_knee(curve.cs, curve.ells_normalized, config.win, config.epsilon);
    estimate.alpha_hat = knee.alpha_hat;
    estimate.heuristic_trace = knee.trace;
    estimate.low_confidence = knee.at_boundary;
    if (knee.at_boundary)
        estimate.warnings.push_back("knee detected at the edge of the eligible grid range");
    estimate.warnings.insert(estimate.warnings.end(), curve.warnings.begin(), curve.warnings.end());
    estimate.curve = std::move(curve);
    return estimate;
}

}  // namespace alphamax

#endif  // ALPHAMAX_ALPHAMAX_HPP
