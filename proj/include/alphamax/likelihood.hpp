// Component reweighting densities h1, h0, h and the combined log-likelihood
// of a BetaVector, with its gradient restricted to the level set.
//
// With histogram kernels every point in bin b sees the same density value,
// so sums over samples collapse to per-bin counts times per-bin logs and
// each evaluation costs O(k) instead of O(n).

#ifndef ALPHAMAX_LIKELIHOOD_HPP
#define ALPHAMAX_LIKELIHOOD_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "alphamax/density.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

// Per-bin counts of a (model, samples) pair, computed once and shared
// read-only by every likelihood/gradient evaluation.
struct BinTallies {
    std::vector<std::int64_t> mix;   // counts of the mixture sample per bin
    std::vector<std::int64_t> comp;  // counts of the component sample per bin
    std::int64_t n_mix = 0;
    std::int64_t n_comp = 0;

    BinTallies() = default;

    BinTallies(const HistogramModel& model, const std::vector<double>& x1,
               const std::vector<double>& x) {
        mix.assign(model.bins(), 0);
        comp.assign(model.bins(), 0);
        for (double v : x) {
            const auto b = model.bin_index(v);
            if (!b) throw std::invalid_argument("mixture point outside histogram support");
            ++mix[*b];
        }
        for (double v : x1) {
            const auto b = model.bin_index(v);
            if (!b) throw std::invalid_argument("component point outside histogram support");
            ++comp[*b];
        }
        n_mix = static_cast<std::int64_t>(x.size());
        n_comp = static_cast<std::int64_t>(x1.size());
    }

    // Reuses the counts recorded when the model was built.
    static BinTallies from_model(const HistogramModel& model) {
        BinTallies t;
        t.mix = model.counts_mix;
        t.comp = model.counts_comp;
        for (auto c : t.mix) t.n_mix += c;
        for (auto c : t.comp) t.n_comp += c;
        return t;
    }
};

namespace detail {

inline void check_beta(const HistogramModel& model, const BetaVector& beta) {
    if (beta.size() != model.bins())
        throw std::invalid_argument("beta length does not match histogram bins");
    for (double b : beta.beta)
        if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("beta components must lie in [0,1]");
}

inline double beta_mass(const HistogramModel& model, const BetaVector& beta) {
    double s = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) s += beta[i] * model.w[i];
    return s;
}

inline double residual_mass(const HistogramModel& model, const BetaVector& beta) {
    double s = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) s += (1.0 - beta[i]) * model.w[i];
    return s;
}

}  // namespace detail

// h1(x|beta) = sum_i beta_i w_i kappa_i(x) / sum_i beta_i w_i.
inline double eval_h1(const HistogramModel& model, const BetaVector& beta, double x) {
    detail::check_beta(model, beta);
    const double s = detail::beta_mass(model, beta);
    if (s <= 0.0) throw std::invalid_argument("empty positive component: all beta are 0");
    const auto b = model.bin_index(x);
    if (!b) return 0.0;
    return beta[*b] * model.w[*b] / (model.width * s);
}

// h0(x|beta) = sum_i (1-beta_i) w_i kappa_i(x) / sum_i (1-beta_i) w_i.
inline double eval_h0(const HistogramModel& model, const BetaVector& beta, double x) {
    detail::check_beta(model, beta);
    const double s0 = detail::residual_mass(model, beta);
    if (s0 <= 0.0) throw std::invalid_argument("empty negative component: all beta are 1");
    const auto b = model.bin_index(x);
    if (!b) return 0.0;
    return (1.0 - beta[*b]) * model.w[*b] / (model.width * s0);
}

// h(x|beta): the mixture model with the component part pinned to the
// component-sample estimate, (sum beta_i w_i) f1_hat(x) + (1 - sum) h0(x|beta).
inline double eval_h(const HistogramModel& model, const BetaVector& beta, double x) {
    detail::check_beta(model, beta);
    const double s = detail::beta_mass(model, beta);
    const double s0 = detail::residual_mass(model, beta);
    if (s0 <= 0.0) throw std::invalid_argument("empty negative component: all beta are 1");
    const auto b = model.bin_index(x);
    if (!b) return 0.0;
    const double comp = model.comp_mass[*b] / model.width;
    const double h0 = (1.0 - beta[*b]) * model.w[*b] / (model.width * s0);
    return s * comp + (1.0 - s) * h0;
}

// Combined log-likelihood
//   gamma * sum_{x in X} log h(x|beta) + gamma1 * sum_{x in X1} log h1(x|beta)
// aggregated over bins. Returns -infinity (a value, not an error) when an
// occupied bin has zero h or h1, so a line search can reject the iterate.
inline double log_likelihood(const HistogramModel& model, const BetaVector& beta,
                             const BinTallies& tallies, const LikelihoodWeights& weights) {
    detail::check_beta(model, beta);
    const double s = detail::beta_mass(model, beta);
    const double s0 = detail::residual_mass(model, beta);
    const double inf = std::numeric_limits<double>::infinity();

    const bool need_comp_term = weights.gamma1 != 0.0 && tallies.n_comp > 0;
    if (need_comp_term && s <= 0.0) return -inf;
    if (s0 <= 0.0) throw std::invalid_argument("empty negative component: all beta are 1");

    const double rho = (1.0 - s) / s0;  // equals 1 up to rounding of sum(w)
    double mix_term = 0.0, comp_term = 0.0;
    for (std::size_t b = 0; b < model.bins(); ++b) {
        if (tallies.mix[b] > 0) {
            const double hb = s * model.comp_mass[b] + rho * (1.0 - beta[b]) * model.w[b];
            if (hb <= 0.0) return -inf;
            mix_term += tallies.mix[b] * std::log(hb);
        }
        if (need_comp_term && tallies.comp[b] > 0) {
            const double h1b = beta[b] * model.w[b];
            if (h1b <= 0.0) return -inf;
            comp_term += tallies.comp[b] * std::log(h1b);
        }
    }
    const double log_width = std::log(model.width);
    mix_term -= tallies.n_mix * log_width;
    if (need_comp_term) comp_term -= tallies.n_comp * (log_width + std::log(s));
    return weights.gamma * mix_term + (need_comp_term ? weights.gamma1 * comp_term : 0.0);
}

inline double log_likelihood(const HistogramModel& model, const BetaVector& beta,
                             const std::vector<double>& x1, const std::vector<double>& x,
                             const LikelihoodWeights& weights) {
    return log_likelihood(model, beta, BinTallies(model, x1, x), weights);
}

// Gradient of the log-likelihood restricted to the level set sum(beta_i w_i)
// = const. There the -log sum(beta w) part of log h1 is constant and drops,
// leaving
//   d/d beta_i = gamma1 * sum_{X1} w_i k_i(x) / sum_j beta_j w_j k_j(x)
//              - gamma  * sum_{X}  w_i k_i(x) / h(x|beta).
// Requires strict feasibility: no occupied component bin with beta = 0.
inline std::vector<double> gradient_on_levelset(const HistogramModel& model, const BetaVector& beta,
                                                const BinTallies& tallies,
                                                const LikelihoodWeights& weights) {
    detail::check_beta(model, beta);
    const double s = detail::beta_mass(model, beta);
    const double s0 = detail::residual_mass(model, beta);
    if (s0 <= 0.0) throw std::invalid_argument("empty negative component: all beta are 1");
    const double rho = (1.0 - s) / s0;

    std::vector<double> grad(model.bins(), 0.0);
    for (std::size_t b = 0; b < model.bins(); ++b) {
        double g = 0.0;
        if (weights.gamma1 != 0.0 && tallies.comp[b] > 0) {
            if (beta[b] <= 0.0)
                throw std::invalid_argument("gradient requires beta > 0 on occupied component bins");
            g += weights.gamma1 * tallies.comp[b] / beta[b];
        }
        if (tallies.mix[b] > 0) {
            const double hb = s * model.comp_mass[b] + rho * (1.0 - beta[b]) * model.w[b];
            if (hb <= 0.0)
                throw std::invalid_argument("gradient requires h > 0 on occupied mixture bins");
            g -= weights.gamma * tallies.mix[b] * rho * model.w[b] / hb;
        }
        grad[b] = g;
    }
    return grad;
}

inline std::vector<double> gradient_on_levelset(const HistogramModel& model, const BetaVector& beta,
                                                const std::vector<double>& x1,
                                                const std::vector<double>& x,
                                                const LikelihoodWeights& weights) {
    return gradient_on_levelset(model, beta, BinTallies(model, x1, x), weights);
}

}  // namespace alphamax

#endif  // ALPHAMAX_LIKELIHOOD_HPP
