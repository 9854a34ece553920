#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "alphamax/density.hpp"
#include "alphamax/rng.hpp"

using namespace alphamax;
using Catch::Approx;

namespace {

// Restates Scott's rule independently of the implementation.
double scott_width(const std::vector<double>& x1) {
    double mean = 0.0;
    for (double v : x1) mean += v;
    mean /= x1.size();
    double ss = 0.0;
    for (double v : x1) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (x1.size() - 1));
    return 3.49 * sd * std::pow(static_cast<double>(x1.size()), -1.0 / 3.0);
}

}  // namespace

TEST_CASE("bin width follows Scott's rule on the component sample") {
    Rng rng(7);
    std::vector<double> x1, x;
    for (int i = 0; i < 1000; ++i) x1.push_back(rng.normal());
    for (int i = 0; i < 500; ++i) x.push_back(rng.normal());

    const auto model = build_histogram(x1, x);
    CHECK(model.width == Approx(scott_width(x1)).epsilon(1e-12));
    // with sd ~ 1 and n = 1000 the width sits near 3.49 / 10
    CHECK(model.width == Approx(0.349).margin(0.02));
}

TEST_CASE("two-point sample with explicit unit width splits its counts") {
    const std::vector<double> pts{0.0, 1.0};
    const auto model = build_histogram(pts, pts, 0.0, 1.0);
    REQUIRE(model.bins() == 2);
    CHECK(model.counts_comp == std::vector<std::int64_t>{1, 1});
    CHECK(model.counts_mix == std::vector<std::int64_t>{1, 1});
    CHECK(model.w[0] == Approx(0.5));
    CHECK(model.w[1] == Approx(0.5));
}

TEST_CASE("bins cover both sample ranges and smoothing keeps every bin positive") {
    Rng rng(11);
    std::vector<double> x1, x;
    for (int i = 0; i < 200; ++i) x1.push_back(rng.uniform(0.0, 1.0));
    for (int i = 0; i < 200; ++i) x.push_back(rng.uniform(0.0, 3.0));

    const auto model = build_histogram(x1, x);
    CHECK(model.edges.front() <= std::min(*std::min_element(x.begin(), x.end()),
                                          *std::min_element(x1.begin(), x1.end())));
    CHECK(model.edges.back() >= *std::max_element(x.begin(), x.end()));
    for (double wi : model.w) CHECK(wi > 0.0);
    for (double mi : model.comp_mass) CHECK(mi > 0.0);

    std::int64_t mix_total = 0, comp_total = 0;
    for (auto c : model.counts_mix) mix_total += c;
    for (auto c : model.counts_comp) comp_total += c;
    CHECK(mix_total == 200);
    CHECK(comp_total == 200);
}

TEST_CASE("pdf_mixture reads w over width inside the support") {
    HistogramModel model;
    model.edges = {0.0, 1.0, 2.0};
    model.width = 1.0;
    model.w = {0.25, 0.75};
    model.comp_mass = {0.5, 0.5};

    CHECK(pdf_mixture(model, 0.5) == Approx(0.25));
    CHECK(pdf_mixture(model, -1.0) == 0.0);
    CHECK(pdf_component(model, 0.5) == Approx(0.5));
    CHECK(pdf_component(model, 9.0) == 0.0);

    double riemann = 0.0;
    for (std::size_t b = 0; b < model.bins(); ++b)
        riemann += pdf_mixture(model, 0.5 * (model.edges[b] + model.edges[b + 1])) * model.width;
    CHECK(riemann == Approx(1.0).margin(1e-12));
}

TEST_CASE("smoothing floors the component density above zero off its sample") {
    // component sample lives entirely in the first bin
    const std::vector<double> x1{0.1, 0.2, 0.3};
    const std::vector<double> x{0.1, 1.5, 1.8};
    const auto model = build_histogram(x1, x, 0.5, 1.0);
    REQUIRE(model.bins() >= 2);
    CHECK(pdf_component(model, 1.5) > 0.0);
}

TEST_CASE("pdf_mixture integrates to one for built histograms") {
    Rng rng(13);
    std::vector<double> x1, x;
    for (int i = 0; i < 300; ++i) x1.push_back(rng.normal(1.0, 2.0));
    for (int i = 0; i < 400; ++i) x.push_back(rng.laplace(0.0, 1.0));
    const auto model = build_histogram(x1, x);

    double riemann = 0.0;
    for (std::size_t b = 0; b < model.bins(); ++b)
        riemann += pdf_mixture(model, 0.5 * (model.edges[b] + model.edges[b + 1])) * model.width;
    CHECK(riemann == Approx(1.0).margin(1e-9));

    double sum_w = 0.0, sum_comp = 0.0;
    for (std::size_t b = 0; b < model.bins(); ++b) {
        sum_w += model.w[b];
        sum_comp += model.comp_mass[b];
    }
    CHECK(sum_w == Approx(1.0).margin(1e-12));
    CHECK(sum_comp == Approx(1.0).margin(1e-12));
}

TEST_CASE("the smallest density ratio never exceeds one") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x1, x;
        const double shift = rng.uniform(-2.0, 2.0);
        for (int i = 0; i < 50 + rep * 10; ++i) x1.push_back(rng.normal(shift, 1.0));
        for (int i = 0; i < 80 + rep * 5; ++i) x.push_back(rng.normal(0.0, 1.5));
        const auto model = build_histogram(x1, x);
        double min_ratio = 1e300;
        for (std::size_t b = 0; b < model.bins(); ++b)
            min_ratio = std::min(min_ratio, model.w[b] / model.comp_mass[b]);
        CHECK(min_ratio > 0.0);
        CHECK(min_ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("zero-variance component sample falls back to a tenth of the pooled range") {
    const std::vector<double> x1{2.0, 2.0, 2.0};
    const std::vector<double> x{0.0, 4.0};
    const auto model = build_histogram(x1, x);
    CHECK(model.width == Approx(0.4));

    const std::vector<double> point{1.0, 1.0};
    CHECK_THROWS_WITH(build_histogram(point, point),
                      Catch::Matchers::ContainsSubstring("degenerate sample"));
}

TEST_CASE("ecdf counts points at or below the query") {
    const std::vector<double> sample{1.0, 2.0, 3.0};
    const auto vals = ecdf_eval(sample, {2.0, 0.5, 3.0, 9.0});
    CHECK(vals[0] == Approx(2.0 / 3.0));
    CHECK(vals[1] == 0.0);
    CHECK(vals[2] == 1.0);
    CHECK(vals[3] == 1.0);
}

TEST_CASE("ecdf is a rank statistic and monotone in the query") {
    Rng rng(19);
    std::vector<double> sample, queries;
    for (int i = 0; i < 60; ++i) sample.push_back(rng.normal());
    for (int i = 0; i < 30; ++i) queries.push_back(rng.normal());
    std::sort(queries.begin(), queries.end());

    const auto base = ecdf_eval(sample, queries);
    for (std::size_t i = 1; i < base.size(); ++i) CHECK(base[i] >= base[i - 1]);

    auto g = [](double v) { return std::exp(v) + v; };  // strictly increasing
    std::vector<double> gs, gq;
    for (double v : sample) gs.push_back(g(v));
    for (double v : queries) gq.push_back(g(v));
    const auto mapped = ecdf_eval(gs, gq);
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(mapped[i] == base[i]);
}
