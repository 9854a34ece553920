#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "alphamax/density.hpp"
#include "alphamax/levelset.hpp"
#include "alphamax/rng.hpp"

using namespace alphamax;
using Catch::Approx;

namespace {

// k=3 toy instance with hand-set counts; samples enter through the tallies.
struct Toy {
    HistogramModel model;
    BinTallies tallies;
    LikelihoodWeights weights;
};

Toy make_toy(const std::vector<std::int64_t>& counts_mix,
             const std::vector<std::int64_t>& counts_comp, double pseudocount = 0.5) {
    Toy toy;
    const std::size_t k = counts_mix.size();
    toy.model.width = 1.0;
    toy.model.edges.resize(k + 1);
    for (std::size_t i = 0; i <= k; ++i) toy.model.edges[i] = static_cast<double>(i);
    toy.model.counts_mix = counts_mix;
    toy.model.counts_comp = counts_comp;
    toy.model.pseudocount = pseudocount;

    std::int64_t n = 0, n1 = 0;
    for (auto c : counts_mix) n += c;
    for (auto c : counts_comp) n1 += c;
    toy.model.w.resize(k);
    toy.model.comp_mass.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        toy.model.w[i] = (counts_mix[i] + pseudocount) / (n + k * pseudocount);
        toy.model.comp_mass[i] = (counts_comp[i] + pseudocount) / (n1 + k * pseudocount);
    }
    toy.tallies = BinTallies::from_model(toy.model);
    toy.weights = LikelihoodWeights::per_sample(n, n1);
    return toy;
}

// Exhaustive search over the feasible beta grid at the given resolution.
double brute_force_max(const Toy& toy, double c, double resolution) {
    const auto& w = toy.model.w;
    double best = -1e300;
    const int steps = static_cast<int>(std::round(1.0 / resolution));
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j <= steps; ++j) {
            BetaVector beta;
            beta.beta = {i * resolution, j * resolution, 0.0};
            const double rem = c - beta.beta[0] * w[0] - beta.beta[1] * w[1];
            beta.beta[2] = rem / w[2];
            if (beta.beta[2] < 0.0 || beta.beta[2] > 1.0) continue;
            best = std::max(best, log_likelihood(toy.model, beta, toy.tallies, toy.weights));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("feasible_init returns the all-c vector") {
    const auto toy = make_toy({10, 12, 8}, {15, 10, 5});
    for (double c : {0.01, 0.5, 0.99}) {
        const auto beta = feasible_init(toy.model, c);
        for (double b : beta.beta) CHECK(b == c);
        CHECK(beta.mixing_proportion(toy.model.w) == Approx(c).margin(1e-12));
    }
    CHECK_THROWS(feasible_init(toy.model, 0.0));
    CHECK_THROWS(feasible_init(toy.model, 1.0));
}

TEST_CASE("projection leaves feasible points unchanged") {
    const auto toy = make_toy({10, 12, 8}, {15, 10, 5});
    Rng rng(1);
    for (int rep = 0; rep < 10; ++rep) {
        const double c = rng.uniform(0.1, 0.9);
        const auto feasible = feasible_init(toy.model, c);
        const auto projected = project_to_level_set(feasible.beta, toy.model.w, c);
        for (std::size_t i = 0; i < feasible.size(); ++i)
            CHECK(projected[i] == Approx(feasible[i]).margin(1e-12));
    }
}

TEST_CASE("projection matches a fine-grid search on a two-bin instance") {
    const std::vector<double> w{0.5, 0.5};
    const std::vector<double> y{1.2, -0.2};
    const double c = 0.5;
    const auto projected = project_to_level_set(y, w, c);

    double best_d = 1e300;
    std::vector<double> best{0.0, 0.0};
    for (int i = 0; i <= 10000; ++i) {
        const double b1 = i * 1e-4;
        const double b2 = (c - w[0] * b1) / w[1];
        if (b2 < 0.0 || b2 > 1.0) continue;
        const double d = (b1 - y[0]) * (b1 - y[0]) + (b2 - y[1]) * (b2 - y[1]);
        if (d < best_d) {
            best_d = d;
            best = {b1, b2};
        }
    }
    CHECK(projected[0] == Approx(best[0]).margin(1e-3));
    CHECK(projected[1] == Approx(best[1]).margin(1e-3));
    // the exact answer clips to the box corner (1, 0)
    CHECK(projected[0] == Approx(1.0).margin(1e-10));
    CHECK(projected[1] == Approx(0.0).margin(1e-10));
}

TEST_CASE("projection is idempotent and feasible") {
    Rng rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t k = 2 + rep % 6;
        std::vector<double> w(k), y(k);
        double total = 0.0;
        for (auto& v : w) {
            v = rng.uniform(0.1, 1.0);
            total += v;
        }
        for (auto& v : w) v /= total;
        for (auto& v : y) v = rng.uniform(-1.5, 2.5);
        const double c = rng.uniform(0.05, 0.95);

        const auto once = project_to_level_set(y, w, c);
        double mass = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(once[i] >= 0.0);
            CHECK(once[i] <= 1.0);
            mass += once[i] * w[i];
        }
        CHECK(mass == Approx(c).margin(1e-10));

        const auto twice = project_to_level_set(once.beta, w, c);
        for (std::size_t i = 0; i < k; ++i) CHECK(twice[i] == Approx(once[i]).margin(1e-10));
    }
}

TEST_CASE("solver reaches the brute-force optimum on a k=3 toy") {
    const auto toy = make_toy({10, 12, 8}, {15, 10, 5});
    for (double c : {0.2, 0.4, 0.7}) {
        const auto sol = solve_level_set(toy.model, toy.tallies, toy.weights, c, 1e-10, 2000);
        const double brute = brute_force_max(toy, c, 0.01);
        CHECK(sol.ell >= brute - 1e-9);            // grid can never beat the true max
        CHECK(std::abs(sol.ell - brute) <= 1e-3);  // and must come close
    }
}

TEST_CASE("identical components make every level set equally likely") {
    Rng rng(3);
    std::vector<double> x;
    for (int i = 0; i < 400; ++i) x.push_back(rng.uniform(0.0, 5.0));
    const auto model = build_histogram(x, x, 0.0);  // no smoothing: w == comp_mass exactly
    for (double wi : model.w) REQUIRE(wi > 0.0);
    const BinTallies tallies(model, x, x);
    const LikelihoodWeights weights = LikelihoodWeights::per_sample(x.size(), x.size());

    double lo = 1e300, hi = -1e300;
    for (double c = 0.05; c <= 0.951; c += 0.05) {
        const auto sol = solve_level_set(model, tallies, weights, c, 1e-12, 5000);
        lo = std::min(lo, sol.ell);
        hi = std::max(hi, sol.ell);
    }
    CHECK(hi - lo <= 1e-6);
}

TEST_CASE("the returned point has zero projected gradient") {
    const auto toy = make_toy({25, 5, 14}, {9, 18, 3});
    const double c = 0.35;
    const auto sol = solve_level_set(toy.model, toy.tallies, toy.weights, c, 0.0, 20000);
    const auto grad = gradient_on_levelset(toy.model, sol.beta, toy.tallies, toy.weights);
    std::vector<double> shifted(sol.beta.beta);
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += grad[i];
    const auto moved = project_to_level_set(shifted, toy.model.w, c);
    double disp = 0.0;
    for (std::size_t i = 0; i < shifted.size(); ++i)
        disp = std::max(disp, std::abs(moved[i] - sol.beta.beta[i]));
    CHECK(disp <= 1e-5);
}

TEST_CASE("objective never decreases across accepted iterations") {
    const auto toy = make_toy({25, 5, 14, 30}, {9, 18, 3, 2});
    const auto sol = solve_level_set(toy.model, toy.tallies, toy.weights, 0.45);
    REQUIRE(sol.ell_trace.size() >= 2);
    for (std::size_t i = 1; i < sol.ell_trace.size(); ++i)
        CHECK(sol.ell_trace[i] >= sol.ell_trace[i - 1]);
}

TEST_CASE("different feasible starts reach the same optimal value") {
    const auto toy = make_toy({25, 5, 14, 30, 11}, {9, 18, 3, 2, 12});
    const double c = 0.55;
    Rng rng(4);
    const auto reference = solve_level_set(toy.model, toy.tallies, toy.weights, c, 1e-12, 20000);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> y(toy.model.bins());
        for (auto& v : y) v = rng.uniform(0.0, 1.0);
        const BetaVector init = project_to_level_set(y, toy.model.w, c);
        const auto sol =
            solve_level_set(toy.model, toy.tallies, toy.weights, c, 1e-12, 20000, &init);
        CHECK(sol.ell == Approx(reference.ell).margin(1e-5));
    }
}

TEST_CASE("an exhausted iteration budget returns the best iterate unconverged") {
    const auto toy = make_toy({25, 5, 14, 30}, {9, 18, 3, 2});
    const auto sol = solve_level_set(toy.model, toy.tallies, toy.weights, 0.5, 1e-16, 1);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 1);
    CHECK(std::isfinite(sol.ell));
}

TEST_CASE("every accepted iterate stays on the level set") {
    const auto toy = make_toy({10, 12, 8}, {15, 10, 5});
    for (double c : {0.15, 0.6, 0.85}) {
        const auto sol = solve_level_set(toy.model, toy.tallies, toy.weights, c);
        double mass = 0.0;
        for (std::size_t i = 0; i < sol.beta.size(); ++i) {
            CHECK(sol.beta[i] >= 0.0);
            CHECK(sol.beta[i] <= 1.0);
            mass += sol.beta[i] * toy.model.w[i];
        }
        CHECK(mass == Approx(c).margin(1e-10));
    }
}
