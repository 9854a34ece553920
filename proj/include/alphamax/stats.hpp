// Small statistics toolkit for the benchmark harness: mean absolute error
// and the two-sided Welch t-test.

#ifndef ALPHAMAX_STATS_HPP
#define ALPHAMAX_STATS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace alphamax {

inline double mean_abs_error(const std::vector<double>& estimates, double truth) {
    if (estimates.empty()) throw std::invalid_argument("mean_abs_error needs at least one estimate");
    double s = 0.0;
    for (double e : estimates) s += std::abs(e - truth);
    return s / estimates.size();
}

namespace detail {

// Regularized incomplete beta function I_x(a, b) by continued fraction
// (modified Lentz), the standard route to the Student-t CDF.
inline double incomplete_beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * incomplete_beta_cf(a, b, x) / a;
    return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

inline void mean_var(const std::vector<double>& xs, double& mean, double& var) {
    mean = 0.0;
    for (double v : xs) mean += v;
    mean /= xs.size();
    var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    var /= (xs.size() - 1);
}

}  // namespace detail

// Two-sided tail probability of Student's t with `df` degrees of freedom:
// P(|T| >= |t|).
inline double student_t_two_sided(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("degrees of freedom must be positive");
    const double x = df / (df + t * t);
    return detail::incomplete_beta(0.5 * df, 0.5, x);
}

struct WelchResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Welch's unequal-variance two-sample t-test, two-sided. When both samples
// have zero variance the p-value degenerates to 1 if the means agree and 0
// otherwise.
inline WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t_test needs at least two values per sample");

    double mean_a, var_a, mean_b, var_b;
    detail::mean_var(a, mean_a, var_a);
    detail::mean_var(b, mean_b, var_b);

    WelchResult result;
    const double sa = var_a / a.size();
    const double sb = var_b / b.size();
    if (sa + sb == 0.0) {
        result.statistic = 0.0;
        result.df = static_cast<double>(a.size() + b.size() - 2);
        result.p_value = mean_a == mean_b ? 1.0 : 0.0;
        return result;
    }
    result.statistic = (mean_a - mean_b) / std::sqrt(sa + sb);
    result.df = (sa + sb) * (sa + sb) /
                (sa * sa / (a.size() - 1) + sb * sb / (b.size() - 1));
    result.p_value = student_t_two_sided(result.statistic, result.df);
    return result;
}

}  // namespace alphamax

#endif  // ALPHAMAX_STATS_HPP
