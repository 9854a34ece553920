#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "alphamax/baselines.hpp"
#include "alphamax/rng.hpp"
#include "alphamax/synthdata.hpp"

using namespace alphamax;
using Catch::Approx;

TEST_CASE("pdf-ratio takes the smallest density ratio over component points") {
    HistogramModel model;
    model.edges = {0.0, 1.0, 2.0};
    model.width = 1.0;
    model.w = {0.7, 0.3};
    model.comp_mass = {0.5, 0.5};
    const std::vector<double> x1{0.5, 1.5};  // both bins occupied
    const auto est = pdf_ratio_estimate(model, x1);
    CHECK(est.method == "pdf-ratio");
    CHECK(est.alpha_hat == Approx(0.6).margin(1e-12));
}

TEST_CASE("pdf-ratio sees identical samples as a pure component") {
    Rng rng(31);
    std::vector<double> x;
    for (int i = 0; i < 2000; ++i) x.push_back(rng.normal());
    const auto model = build_histogram(x, x);
    const auto est = pdf_ratio_estimate(model, x);
    CHECK(est.alpha_hat == Approx(1.0).margin(1e-12));
}

TEST_CASE("pdf-ratio stays above the smoothing floor") {
    Rng rng(32);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> x1, x;
        for (int i = 0; i < 200; ++i) x1.push_back(rng.normal(3.0, 1.0));
        for (int i = 0; i < 400; ++i) x.push_back(rng.normal(0.0, 1.0));
        const auto model = build_histogram(x1, x);
        const auto est = pdf_ratio_estimate(model, x1);
        const double floor =
            model.pseudocount / (static_cast<double>(x.size()) + model.bins() * model.pseudocount);
        CHECK(est.alpha_hat >= floor);
        CHECK(est.alpha_hat <= 1.0);
    }
}

TEST_CASE("pdf-ratio tracks a small mixing proportion") {
    // moderately separated components, small true alpha
    double mae = 0.0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        const auto data = gen_gaussian(0.05, 2.0, 10000, 1000, derive_seed(300, 0, t));
        const auto x1 = PUDataset::column(data.positives);
        const auto x = PUDataset::column(data.unlabeled);
        const auto model = build_histogram(x1, x);
        mae += std::abs(pdf_ratio_estimate(model, x1).alpha_hat - 0.05);
    }
    CHECK(mae / trials <= 0.08);
}

TEST_CASE("cdf-based estimate matches the hand-worked two-point case") {
    const std::vector<double> x1{1.0, 2.0};
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto est = cdf_based_estimate(x, x1);
    CHECK(est.method == "cdf-based");
    CHECK(est.alpha_hat == Approx(0.5).margin(1e-12));
}

TEST_CASE("cdf-based estimate agrees with a brute-force alpha scan") {
    Rng rng(33);
    for (int rep = 0; rep < 8; ++rep) {
        std::vector<double> x1, x;
        for (int i = 0; i < 25; ++i) x1.push_back(rng.normal(1.0, 1.0));
        for (int i = 0; i < 40; ++i)
            x.push_back(rng.bernoulli(0.5) ? rng.normal(1.0, 1.0) : rng.normal(-1.0, 1.0));

        std::vector<double> points(x1);
        std::sort(points.begin(), points.end());
        const auto F = ecdf_eval(x, points);
        const auto F1 = ecdf_eval(x1, points);
        double brute = 0.001;
        for (int g = 1; g <= 1000; ++g) {
            const double alpha = g * 0.001;
            bool ok = true;
            std::size_t prev_site = points.size();  // none yet
            for (std::size_t i = 0; i < points.size() && ok; ++i) {
                if (F[i] - alpha * F1[i] < -1e-12) ok = false;
                const bool site = i + 1 == points.size() || F[i + 1] != F[i];
                if (ok && site) {
                    if (prev_site < points.size() &&
                        (F[i] - F[prev_site]) - alpha * (F1[i] - F1[prev_site]) < -1e-12)
                        ok = false;
                    prev_site = i;
                }
            }
            if (ok) brute = alpha;
        }
        CHECK(cdf_based_estimate(x, x1).alpha_hat == Approx(brute).margin(1e-12));
    }
}

TEST_CASE("cdf-based estimate returns one for identical samples") {
    Rng rng(34);
    std::vector<double> x;
    for (int i = 0; i < 500; ++i) x.push_back(rng.laplace(0.0, 1.0));
    CHECK(cdf_based_estimate(x, x).alpha_hat == Approx(1.0));
}

TEST_CASE("cdf-based estimate is exactly invariant under increasing transforms") {
    Rng rng(35);
    std::vector<double> x1, x;
    for (int i = 0; i < 60; ++i) x1.push_back(rng.normal(1.0, 1.0));
    for (int i = 0; i < 150; ++i)
        x.push_back(rng.bernoulli(0.3) ? rng.normal(1.0, 1.0) : rng.normal(-0.5, 1.0));
    const double base = cdf_based_estimate(x, x1).alpha_hat;

    auto apply = [&](auto&& g) {
        std::vector<double> gx1, gx;
        for (double v : x1) gx1.push_back(g(v));
        for (double v : x) gx.push_back(g(v));
        return cdf_based_estimate(gx, gx1).alpha_hat;
    };
    CHECK(apply([](double v) { return std::atan(v); }) == base);
    CHECK(apply([](double v) { return std::exp(0.5 * v); }) == base);
    CHECK(apply([](double v) { return 3.0 * v - 7.0; }) == base);
}

TEST_CASE("cdf-based estimate flags an infeasible grid") {
    // the unlabeled sample sits strictly above the component sample, so
    // F - alpha F1 is negative at the smallest component point for any alpha
    const std::vector<double> x1{0.0};
    const std::vector<double> x{1.0, 2.0};
    const auto est = cdf_based_estimate(x, x1);
    CHECK(est.alpha_hat == Approx(0.001));
    CHECK(est.low_confidence);
    REQUIRE_FALSE(est.warnings.empty());
}

TEST_CASE("cdf-based estimate recovers a small mixing proportion") {
    double mae = 0.0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        const auto data = gen_gaussian(0.05, 2.0, 10000, 1000, derive_seed(301, 0, t));
        mae += std::abs(
            cdf_based_estimate(PUDataset::column(data.unlabeled), PUDataset::column(data.positives))
                .alpha_hat -
            0.05);
    }
    CHECK(mae / trials <= 0.05);
}

TEST_CASE("gmm splits a well-separated symmetric mixture") {
    Rng rng(36);
    std::vector<double> x, x1;
    for (int i = 0; i < 4000; ++i) x.push_back(rng.bernoulli(0.5) ? rng.normal(10.0, 1.0) : rng.normal(0.0, 1.0));
    for (int i = 0; i < 500; ++i) x1.push_back(rng.normal(10.0, 1.0));

    GmmFit fit;
    const auto est = gmm_em_estimate(x, x1, 5, 1e-8, 1000, 7, &fit);
    CHECK(est.method == "gmm");
    CHECK(est.alpha_hat == Approx(0.5).margin(0.05));
    // the component selected for alpha is the one near mean(x1) ~ 10
    const double chosen_mean = std::abs(fit.mean1 - 10.0) < std::abs(fit.mean0 - 10.0)
                                   ? fit.mean1
                                   : fit.mean0;
    CHECK(chosen_mean == Approx(10.0).margin(0.5));
}

TEST_CASE("EM log-likelihood never decreases") {
    Rng rng(37);
    std::vector<double> x;
    for (int i = 0; i < 1500; ++i) x.push_back(rng.bernoulli(0.3) ? rng.normal(3.0, 1.0) : rng.normal(0.0, 1.5));
    std::vector<double> x1;
    for (int i = 0; i < 100; ++i) x1.push_back(rng.normal(3.0, 1.0));

    GmmFit fit;
    gmm_em_estimate(x, x1, 5, 1e-8, 1000, 11, &fit);
    REQUIRE(fit.log_likelihoods.size() >= 2);
    for (std::size_t i = 1; i < fit.log_likelihoods.size(); ++i)
        CHECK(fit.log_likelihoods[i] >= fit.log_likelihoods[i - 1] - 1e-10);
}

TEST_CASE("one EM step from the truth does not lose likelihood") {
    Rng rng(38);
    std::vector<double> x;
    for (int i = 0; i < 2000; ++i) x.push_back(rng.bernoulli(0.4) ? rng.normal(4.0, 1.0) : rng.normal(0.0, 1.0));
    double var = 0.0, mean = 0.0;
    for (double v : x) mean += v;
    mean /= x.size();
    for (double v : x) var += (v - mean) * (v - mean);
    var /= x.size();

    const auto fit = detail::run_em(x, 0.0, 4.0, 1.0, 1e-6 * var, 0.0, 3);
    REQUIRE(fit.log_likelihoods.size() >= 2);
    CHECK(fit.log_likelihoods[1] >= fit.log_likelihoods[0] - 1e-10);
}

TEST_CASE("gmm recovers the weight of the component nearest the positives") {
    double mae = 0.0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        const auto data = gen_gaussian(0.5, 4.0, 10000, 1000, derive_seed(302, 0, t));
        const auto est = gmm_em_estimate(PUDataset::column(data.unlabeled),
                                         PUDataset::column(data.positives), 5, 1e-8, 1000,
                                         derive_seed(302, 1, t));
        mae += std::abs(est.alpha_hat - 0.5);
    }
    CHECK(mae / trials <= 0.05);
}

TEST_CASE("gmm rejects tiny samples") {
    CHECK_THROWS(gmm_em_estimate({1.0, 2.0, 3.0}, {1.0}));
}
