// Histogram density model over univariate samples, plus empirical CDFs.

#ifndef ALPHAMAX_DENSITY_HPP
#define ALPHAMAX_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "alphamax/types.hpp"

namespace alphamax {

namespace detail {

inline double sample_stddev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (xs.size() - 1));
}

inline void require_finite(const std::vector<double>& xs, const char* name) {
    if (xs.empty()) throw std::invalid_argument(std::string(name) + " sample is empty");
    for (double x : xs)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(name) + " sample has a non-finite value");
}

}  // namespace detail

// Builds the shared binning for a component sample x1 and a mixture sample x.
//
// Bin width comes from Scott's rule on the component sample,
// 3.49 * stddev(x1) * |x1|^(-1/3); bins are anchored at min(x1) and extended
// with the same width until both sample ranges are covered. Both count
// vectors are smoothed with the given pseudocount so every bin carries
// strictly positive mass. An explicit width can be passed to override
// Scott's rule (used by callers that need a specific binning).
inline HistogramModel build_histogram(const std::vector<double>& x1, const std::vector<double>& x,
                                      double pseudocount = 0.5, double explicit_width = 0.0) {
    detail::require_finite(x1, "component");
    detail::require_finite(x, "mixture");
    if (pseudocount < 0.0) throw std::invalid_argument("pseudocount must be nonnegative");

    const auto [min1_it, max1_it] = std::minmax_element(x1.begin(), x1.end());
    const auto [minx_it, maxx_it] = std::minmax_element(x.begin(), x.end());
    const double anchor = *min1_it;
    const double lo = std::min(anchor, *minx_it);
    const double hi = std::max(*max1_it, *maxx_it);

    double width = explicit_width;
    if (width <= 0.0) {
        width = 3.49 * detail::sample_stddev(x1) * std::pow(static_cast<double>(x1.size()), -1.0 / 3.0);
        if (width <= 0.0) width = (hi - lo) / 10.0;  // zero-variance component sample
        if (width <= 0.0) throw std::invalid_argument("degenerate sample");
    }

    // Left of the anchor a point may sit on the first edge (it belongs to
    // bin 0), so ceil suffices; to the right a point on a shared edge goes
    // to the bin after it, so exact multiples get one extra bin.
    long n_left = anchor - lo <= 0.0 ? 0L : static_cast<long>(std::ceil((anchor - lo) / width));
    long n_right = hi - anchor <= 0.0 ? 1L : static_cast<long>(std::floor((hi - anchor) / width)) + 1L;
    while (anchor - n_left * width > lo) ++n_left;    // guard against rounding
    while (anchor + n_right * width < hi) ++n_right;

    const long k = n_left + n_right;
    if (k > 2'000'000) throw std::invalid_argument("histogram would need too many bins; check for outliers");

    HistogramModel model;
    model.width = width;
    model.pseudocount = pseudocount;
    model.edges.resize(k + 1);
    for (long i = 0; i <= k; ++i) model.edges[i] = anchor + (i - n_left) * width;
    model.counts_mix.assign(k, 0);
    model.counts_comp.assign(k, 0);

    auto tally = [&](const std::vector<double>& xs, std::vector<std::int64_t>& counts) {
        for (double v : xs) {
            const auto b = model.bin_index(v);
            if (!b) throw std::logic_error("histogram does not cover a sample point");
            ++counts[*b];
        }
    };
    tally(x, model.counts_mix);
    tally(x1, model.counts_comp);

    auto smooth = [&](const std::vector<std::int64_t>& counts, std::size_t n) {
        std::vector<double> p(counts.size());
        const double denom = static_cast<double>(n) + k * pseudocount;
        for (std::size_t i = 0; i < counts.size(); ++i) p[i] = (counts[i] + pseudocount) / denom;
        return p;
    };
    model.w = smooth(model.counts_mix, x.size());
    model.comp_mass = smooth(model.counts_comp, x1.size());
    return model;
}

// Histogram estimate of the mixture density: w_i / width on bin i, 0 outside.
inline double pdf_mixture(const HistogramModel& model, double x) {
    const auto b = model.bin_index(x);
    return b ? model.w[*b] / model.width : 0.0;
}

// Histogram estimate of the component density.
inline double pdf_component(const HistogramModel& model, double x) {
    const auto b = model.bin_index(x);
    return b ? model.comp_mass[*b] / model.width : 0.0;
}

// Empirical CDF of `sample` evaluated at each query point:
// F(t) = #{s in sample : s <= t} / |sample|.
inline std::vector<double> ecdf_eval(const std::vector<double>& sample,
                                     const std::vector<double>& points) {
    if (sample.empty()) throw std::invalid_argument("ecdf sample is empty");
    std::vector<double> sorted(sample);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(points.size());
    const double n = static_cast<double>(sorted.size());
    for (double t : points) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        out.push_back(static_cast<double>(it - sorted.begin()) / n);
    }
    return out;
}

}  // namespace alphamax

#endif  // ALPHAMAX_DENSITY_HPP
