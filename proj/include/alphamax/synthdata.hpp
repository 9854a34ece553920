// Seeded generators for the synthetic benchmarks: Gaussian and Laplace
// location mixtures, and the ball-in-box multivariate set.

#ifndef ALPHAMAX_SYNTHDATA_HPP
#define ALPHAMAX_SYNTHDATA_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphamax/rng.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

namespace detail {

template <typename DrawPos, typename DrawNeg>
PUDataset mix_dataset(double alpha, std::size_t n, std::size_t n1, std::size_t dim, Rng& rng,
                      DrawPos&& draw_pos, DrawNeg&& draw_neg, std::string provenance) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
    if (n == 0 || n1 == 0) throw std::invalid_argument("sample sizes must be positive");

    PUDataset data;
    data.dim = dim;
    data.provenance = std::move(provenance);
    data.true_alpha = alpha;
    data.positives.reserve(n1);
    data.unlabeled.reserve(n);
    data.component_of_unlabeled.reserve(n);

    for (std::size_t i = 0; i < n1; ++i) data.positives.push_back(draw_pos());
    for (std::size_t i = 0; i < n; ++i) {
        const bool from_positive = rng.bernoulli(alpha);
        data.component_of_unlabeled.push_back(from_positive ? 1 : 0);
        data.unlabeled.push_back(from_positive ? draw_pos() : draw_neg());
    }
    return data;
}

}  // namespace detail

inline double realized_alpha(const PUDataset& data) {
    if (data.component_of_unlabeled.empty() || data.unlabeled.empty())
        throw std::invalid_argument("dataset has no recorded component assignments");
    double positives = 0.0;
    for (auto c : data.component_of_unlabeled) positives += c;
    return positives / static_cast<double>(data.unlabeled.size());
}

// Mixture of two unit-variance Gaussians separated by delta_mu. The
// component sample comes from N(delta_mu, 1); each mixture point is drawn
// from it with probability alpha, else from N(0, 1).
inline PUDataset gen_gaussian(double alpha, double delta_mu, std::size_t n, std::size_t n1,
                              std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x67617573ULL));
    return detail::mix_dataset(
        alpha, n, n1, 1, rng, [&] { return Point{rng.normal(delta_mu, 1.0)}; },
        [&] { return Point{rng.normal(0.0, 1.0)}; },
        "gaussian(alpha=" + std::to_string(alpha) + ", delta_mu=" + std::to_string(delta_mu) + ")");
}

// Same layout with unit-scale Laplace components (inverse-CDF sampling).
inline PUDataset gen_laplace(double alpha, double delta_mu, std::size_t n, std::size_t n1,
                             std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x6c617054ULL));
    return detail::mix_dataset(
        alpha, n, n1, 1, rng, [&] { return Point{rng.laplace(delta_mu, 1.0)}; },
        [&] { return Point{rng.laplace(0.0, 1.0)}; },
        "laplace(alpha=" + std::to_string(alpha) + ", delta_mu=" + std::to_string(delta_mu) + ")");
}

// Unit ball inscribed in the cube [-2,2]^d: positives uniform inside the
// ball (random direction times radius^(1/d)), negatives uniform over the
// rest of the cube by rejection.
inline PUDataset gen_ball_in_box(double alpha, std::size_t d, std::size_t n, std::size_t n1,
                                 std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("dimension must be at least 1");
    Rng rng(derive_seed(seed, 0x62616c6cULL));

    auto draw_ball = [&] {
        Point p(d);
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (auto& v : p) {
                v = rng.normal();
                norm_sq += v * v;
            }
        } while (norm_sq == 0.0);
        const double radius = std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
        const double scale = radius / std::sqrt(norm_sq);
        for (auto& v : p) v *= scale;
        return p;
    };
    auto draw_shell = [&] {
        // Acceptance is 1 - ball/cube volume; for d >= 2 that is nearly 1,
        // and 1/2 at worst (d = 1), so the cap is never a practical limit.
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Point p(d);
            double norm_sq = 0.0;
            for (auto& v : p) {
                v = rng.uniform(-2.0, 2.0);
                norm_sq += v * v;
            }
            if (norm_sq > 1.0) return p;
        }
        throw std::runtime_error("ball-in-box rejection sampling exceeded the attempt cap");
    };

    return detail::mix_dataset(alpha, n, n1, d, rng, draw_ball, draw_shell,
                               "ball-in-box(alpha=" + std::to_string(alpha) +
                                   ", d=" + std::to_string(d) + ")");
}

}  // namespace alphamax

#endif  // ALPHAMAX_SYNTHDATA_HPP
