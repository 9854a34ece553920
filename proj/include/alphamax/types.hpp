// Domain types shared by all estimators.

#ifndef ALPHAMAX_TYPES_HPP
#define ALPHAMAX_TYPES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alphamax {

using Point = std::vector<double>;

// A positive sample plus an unlabeled sample. Immutable after construction;
// safe to share across threads.
struct PUDataset {
    std::vector<Point> positives;
    std::vector<Point> unlabeled;
    std::size_t dim = 0;
    std::string provenance;

    // Generator metadata, absent for ingested data. component_of_unlabeled
    // records which mixture points were drawn from the positive component,
    // so realized proportions stay available to the benchmark harness.
    std::optional<double> true_alpha;
    std::vector<std::uint8_t> component_of_unlabeled;

    bool univariate() const { return dim == 1; }

    // Flattens a univariate sample to a plain vector of reals.
    static std::vector<double> column(const std::vector<Point>& pts) {
        std::vector<double> out;
        out.reserve(pts.size());
        for (const auto& p : pts) out.push_back(p.at(0));
        return out;
    }
};

// Checks the PUDataset invariants. Returns one finding per violation;
// an empty result means the dataset is usable.
inline std::vector<std::string> validate(const PUDataset& data) {
    std::vector<std::string> findings;
    if (data.positives.empty()) findings.push_back("positive sample is empty");
    if (data.unlabeled.empty()) findings.push_back("unlabeled sample is empty");
    if (data.dim == 0) findings.push_back("dimension must be at least 1");

    auto check_points = [&](const std::vector<Point>& pts, const char* name) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].size() != data.dim) {
                findings.push_back(std::string(name) + " point " + std::to_string(i + 1) +
                                   " has dimension " + std::to_string(pts[i].size()) +
                                   ", expected " + std::to_string(data.dim));
                continue;
            }
            for (double v : pts[i]) {
                if (!std::isfinite(v)) {
                    findings.push_back(std::string(name) + " point " + std::to_string(i + 1) +
                                       " has a non-finite coordinate");
                    break;
                }
            }
        }
    };
    check_points(data.positives, "positive");
    check_points(data.unlabeled, "unlabeled");
    return findings;
}

// Shared histogram binning with mixture bin probabilities w and
// component-sample bin probabilities comp_mass. Bins are uniform width,
// half-open [edges[i], edges[i+1]), except that the final edge belongs
// to the last bin.
struct HistogramModel {
    std::vector<double> edges;            // k+1 strictly increasing values
    double width = 0.0;                   // uniform bin width
    std::vector<double> w;                // smoothed mixture bin probabilities
    std::vector<double> comp_mass;        // smoothed component bin probabilities
    std::vector<std::int64_t> counts_mix;
    std::vector<std::int64_t> counts_comp;
    double pseudocount = 0.5;

    std::size_t bins() const { return w.size(); }

    // Bin index of x, or nullopt outside [edges.front(), edges.back()].
    // Points on a shared edge go to the right bin; the final edge goes
    // to the last bin.
    std::optional<std::size_t> bin_index(double x) const {
        if (edges.size() < 2 || x < edges.front() || x > edges.back()) return std::nullopt;
        if (x == edges.back()) return edges.size() - 2;
        // idx = largest i with edges[i] <= x
        const auto it = std::upper_bound(edges.begin(), edges.end(), x);
        return static_cast<std::size_t>(it - edges.begin()) - 1;
    }
};

// Per-kernel reweighting coefficients, each in [0,1].
struct BetaVector {
    std::vector<double> beta;

    std::size_t size() const { return beta.size(); }
    double operator[](std::size_t i) const { return beta[i]; }

    // Mixing proportion implied against a model's bin probabilities w.
    double mixing_proportion(const std::vector<double>& w) const {
        double s = 0.0;
        for (std::size_t i = 0; i < beta.size(); ++i) s += beta[i] * w[i];
        return s;
    }
};

// Weights on the two log-likelihood terms: gamma on the mixture sample,
// gamma1 on the component sample.
struct LikelihoodWeights {
    double gamma = 1.0;
    double gamma1 = 1.0;

    static LikelihoodWeights per_sample(std::size_t n_mix, std::size_t n_comp) {
        return {1.0 / static_cast<double>(n_mix), 1.0 / static_cast<double>(n_comp)};
    }
};

// Profile log-likelihood over the grid of candidate mixing proportions,
// with the processing stages kept for diagnostics and export.
struct LevelSetCurve {
    std::vector<double> cs;               // grid values, strictly increasing
    std::vector<double> ells_raw;         // solver output per grid value
    std::vector<double> ells;             // after monotone correction (non-increasing)
    std::vector<double> ells_smoothed;    // after median smoothing (filled by pipeline)
    std::vector<double> ells_normalized;  // scaled to [0,1] (filled by pipeline)
    std::optional<std::vector<BetaVector>> betas;
    std::vector<std::string> warnings;
};

// One estimator's answer plus whatever it can say about how it got there.
struct PriorEstimate {
    double alpha_hat = 0.0;
    std::string method;                   // alphamax | pdf-ratio | cdf-based | gmm
    std::optional<LevelSetCurve> curve;
    std::vector<std::pair<double, double>> heuristic_trace;  // (c_j, heuristic_j)
    bool transform_used = false;
    bool low_confidence = false;
    std::vector<std::string> warnings;
};

enum class FeatureExpansion { none, quadratic };

// Settings for the multivariate-to-univariate classifier transform.
struct TransformConfig {
    int folds = 5;
    FeatureExpansion expansion = FeatureExpansion::quadratic;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
};

enum class TransformMode { automatic, on, off };

// Everything the level-set pipeline needs. Defaults follow the stated
// algorithm: c grid 0.01..0.99 step 0.01, median window k=3, slope
// window 5 grid points, heuristic epsilon 0.01.
struct AlphaMaxConfig {
    double grid_start = 0.01;
    double grid_stop = 0.99;
    double grid_step = 0.01;
    int smooth_k = 3;
    int win = 5;
    double epsilon = 0.01;
    std::optional<LikelihoodWeights> weights;  // default (1/|X|, 1/|X1|)
    double pseudocount = 0.5;
    double solver_tol = 1e-7;
    int solver_max_iter = 500;
    int jobs = 0;                              // 0 = hardware concurrency
    TransformMode transform_mode = TransformMode::automatic;
    TransformConfig transform;

    std::vector<double> grid() const {
        std::vector<double> g;
        const int steps = static_cast<int>(std::floor((grid_stop - grid_start) / grid_step + 0.5));
        for (int i = 0; i <= steps; ++i) g.push_back(grid_start + grid_step * i);
        while (!g.empty() && g.back() >= 1.0) g.pop_back();
        return g;
    }

    void check() const {
        if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
        if (smooth_k < 0 || win <= 0) throw std::invalid_argument("smooth_k and win must be positive");
        const auto g = grid();
        if (g.size() < 2) throw std::invalid_argument("grid must contain at least two values");
        if (static_cast<std::size_t>(win + smooth_k) * 2 >= g.size())
            throw std::invalid_argument("win + smooth_k must be less than half the grid length");
    }
};

}  // namespace alphamax

#endif  // ALPHAMAX_TYPES_HPP
