#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "alphamax/rng.hpp"
#include "alphamax/stats.hpp"

using namespace alphamax;
using Catch::Approx;

namespace {

double student_pdf(double x, double df) {
    return std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)) /
           std::sqrt(df * 3.14159265358979323846) *
           std::pow(1.0 + x * x / df, -0.5 * (df + 1.0));
}

double simpson(double a, double b, double df, int n) {
    // n must be even
    const double h = (b - a) / n;
    double s = student_pdf(a, df) + student_pdf(b, df);
    for (int i = 1; i < n; ++i) s += student_pdf(a + i * h, df) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// P(|T| > |t|) = 1 - 2 * integral of the density over [0, |t|].
double two_sided_by_quadrature(double t, double df) {
    return 1.0 - 2.0 * simpson(0.0, std::abs(t), df, 20000);
}

}  // namespace

TEST_CASE("mean absolute error is the plain average of absolute deviations") {
    CHECK(mean_abs_error({0.3, 0.5}, 0.4) == Approx(0.1).margin(1e-15));
    CHECK(mean_abs_error({0.7, 0.7, 0.7}, 0.7) == 0.0);
    CHECK(mean_abs_error({0.9}, 0.4) == Approx(0.5).margin(1e-15));
    CHECK_THROWS(mean_abs_error({}, 0.0));
}

TEST_CASE("the t-tail probability matches direct quadrature") {
    for (const auto& [t, df] : std::vector<std::pair<double, double>>{
             {0.5, 3.0}, {1.7, 8.0}, {2.5, 20.0}, {0.05, 199.0}, {3.9, 4.5}}) {
        CHECK(student_t_two_sided(t, df) == Approx(two_sided_by_quadrature(t, df)).margin(1e-9));
    }
}

TEST_CASE("welch statistic and degrees of freedom follow the textbook formulas") {
    Rng rng(51);
    std::vector<double> a, b;
    for (int i = 0; i < 40; ++i) a.push_back(rng.normal(0.0, 1.0));
    for (int i = 0; i < 25; ++i) b.push_back(rng.normal(0.4, 2.0));
    const auto result = welch_t_test(a, b);

    auto stats = [](const std::vector<double>& xs) {
        double m = 0.0;
        for (double v : xs) m += v;
        m /= xs.size();
        double v = 0.0;
        for (double x : xs) v += (x - m) * (x - m);
        return std::pair<double, double>(m, v / (xs.size() - 1));
    };
    const auto [ma, va] = stats(a);
    const auto [mb, vb] = stats(b);
    const double se_a = va / a.size(), se_b = vb / b.size();
    CHECK(result.statistic == Approx((ma - mb) / std::sqrt(se_a + se_b)).margin(1e-12));
    CHECK(result.df == Approx((se_a + se_b) * (se_a + se_b) /
                              (se_a * se_a / (a.size() - 1) + se_b * se_b / (b.size() - 1)))
                           .margin(1e-12));
}

TEST_CASE("identical samples cannot be told apart") {
    const std::vector<double> a{0.2, 0.4, 0.9, 1.3};
    CHECK(welch_t_test(a, a).p_value == Approx(1.0).margin(1e-12));
}

TEST_CASE("strongly separated samples are overwhelmingly significant") {
    Rng rng(52);
    std::vector<double> a, b;
    for (int i = 0; i < 100; ++i) a.push_back(rng.normal(0.0, 1.0));
    for (int i = 0; i < 100; ++i) b.push_back(rng.normal(5.0, 1.0));
    CHECK(welch_t_test(a, b).p_value < 1e-10);
}

TEST_CASE("the test is symmetric in its arguments") {
    Rng rng(53);
    std::vector<double> a, b;
    for (int i = 0; i < 30; ++i) a.push_back(rng.normal(0.0, 1.0));
    for (int i = 0; i < 50; ++i) b.push_back(rng.normal(0.5, 1.5));
    CHECK(welch_t_test(a, b).p_value == Approx(welch_t_test(b, a).p_value).margin(1e-14));
}

TEST_CASE("degenerate zero-variance samples use the documented convention") {
    const std::vector<double> xs{2.0, 2.0, 2.0};
    const std::vector<double> ys{3.0, 3.0};
    CHECK(welch_t_test(xs, xs).p_value == 1.0);
    CHECK(welch_t_test(xs, ys).p_value == 0.0);
    CHECK_THROWS(welch_t_test({1.0}, xs));
}
