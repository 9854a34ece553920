// Multivariate-to-univariate transform that preserves the mixing proportion:
// a probabilistic classifier between the component sample (label 1) and the
// mixture sample (label 0), scored out of fold, plus posterior recovery.

#ifndef ALPHAMAX_TRANSFORM_HPP
#define ALPHAMAX_TRANSFORM_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "alphamax/rng.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

namespace detail {

inline std::vector<double> expand_features(const Point& p, FeatureExpansion expansion) {
    std::vector<double> z(p);
    if (expansion == FeatureExpansion::quadratic) {
        const std::size_t d = p.size();
        z.reserve(d + d * (d + 1) / 2);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) z.push_back(p[i] * p[j]);
    }
    return z;
}

// In-place Cholesky solve of the SPD system A x = b (A row-major, n x n).
inline std::vector<double> cholesky_solve(std::vector<double> A, std::vector<double> b,
                                          std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = A[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
        if (d <= 0.0) throw std::runtime_error("classifier normal equations are not positive definite");
        const double Ljj = std::sqrt(d);
        A[j * n + j] = Ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
            A[i * n + j] = s / Ljj;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {  // L y = b
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= A[i * n + k] * b[k];
        b[i] = s / A[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {  // L^T x = y
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[k * n + i] * b[k];
        b[i] = s / A[i * n + i];
    }
    return b;
}

inline double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace detail

// L2-regularized logistic regression over (optionally expanded) standardized
// features. Scores stay strictly inside (0,1).
struct Classifier {
    FeatureExpansion expansion = FeatureExpansion::none;
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;
    std::vector<double> weights;  // per standardized feature
    double intercept = 0.0;
    bool converged = true;
    int iterations = 0;
    std::vector<double> objective_trace;  // regularized loss after each line-searched step

    double score(const Point& p) const {
        const auto z = detail::expand_features(p, expansion);
        if (z.size() != weights.size()) throw std::invalid_argument("classifier: wrong input dimension");
        double t = intercept;
        for (std::size_t i = 0; i < z.size(); ++i)
            t += weights[i] * (z[i] - feature_mean[i]) / feature_scale[i];
        return std::clamp(detail::sigmoid(t), 1e-12, 1.0 - 1e-12);
    }
};

namespace detail {

// Damped Newton on the mean cross-entropy plus (l2/2)|w|^2 (intercept
// unpenalized). Row-major design matrix of already standardized features.
inline void fit_logistic(const std::vector<double>& design, const std::vector<double>& labels,
                         std::size_t n_rows, std::size_t n_feat, double l2, Classifier& clf,
                         double grad_tol = 1e-6, int max_iter = 5000) {
    const std::size_t dim = n_feat + 1;  // intercept first
    std::vector<double> theta(dim, 0.0);
    std::vector<double> probs(n_rows), grad(dim), hess(dim * dim), direction;

    auto objective = [&](const std::vector<double>& th) {
        double obj = 0.0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            double t = th[0];
            const double* row = design.data() + r * n_feat;
            for (std::size_t j = 0; j < n_feat; ++j) t += th[j + 1] * row[j];
            // log(1 + exp(-t)) for y=1, log(1 + exp(t)) for y=0, stably
            const double m = std::max(t, 0.0);
            obj += m + std::log(std::exp(-m) + std::exp(t - m)) - labels[r] * t;
        }
        obj /= n_rows;
        for (std::size_t j = 1; j < dim; ++j) obj += 0.5 * l2 * th[j] * th[j];
        return obj;
    };

    double obj = objective(theta);
    clf.objective_trace.push_back(obj);
    clf.converged = false;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        // Gradient and Hessian of the mean cross-entropy.
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::size_t r = 0; r < n_rows; ++r) {
            double t = theta[0];
            const double* row = design.data() + r * n_feat;
            for (std::size_t j = 0; j < n_feat; ++j) t += theta[j + 1] * row[j];
            const double p = sigmoid(t);
            const double resid = p - labels[r];
            const double s = std::max(p * (1.0 - p), 1e-12);
            grad[0] += resid;
            hess[0] += s;
            for (std::size_t j = 0; j < n_feat; ++j) {
                grad[j + 1] += resid * row[j];
                hess[j + 1] += s * row[j];  // first row of H
            }
            for (std::size_t a = 0; a < n_feat; ++a) {
                const double sa = s * row[a];
                double* hrow = hess.data() + (a + 1) * dim + 1;
                for (std::size_t b = a; b < n_feat; ++b) hrow[b] += sa * row[b];
            }
        }
        const double inv_n = 1.0 / n_rows;
        double grad_norm = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            grad[j] *= inv_n;
            if (j > 0) grad[j] += l2 * theta[j];
            grad_norm += grad[j] * grad[j];
        }
        grad_norm = std::sqrt(grad_norm);
        if (grad_norm <= grad_tol) {
            clf.converged = true;
            break;
        }

        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = a; b < dim; ++b) {
                double v = hess[a * dim + b] * inv_n;
                if (a == b) v += a == 0 ? 1e-12 : l2;
                hess[a * dim + b] = hess[b * dim + a] = v;
            }

        std::vector<double> neg_grad(grad);
        for (double& g : neg_grad) g = -g;
        direction = cholesky_solve(hess, neg_grad, dim);

        double step = 1.0;
        double descent = 0.0;
        for (std::size_t j = 0; j < dim; ++j) descent += grad[j] * direction[j];
        bool moved = false;
        while (step >= 1e-12) {
            std::vector<double> trial(theta);
            for (std::size_t j = 0; j < dim; ++j) trial[j] += step * direction[j];
            const double trial_obj = objective(trial);
            if (trial_obj <= obj + 1e-4 * step * descent) {
                theta = std::move(trial);
                obj = trial_obj;
                clf.objective_trace.push_back(obj);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;  // no representable descent step
    }
    clf.iterations = iter;
    clf.intercept = theta[0];
    clf.weights.assign(theta.begin() + 1, theta.end());
}

struct DesignMatrix {
    std::vector<double> values;  // row-major, standardized
    std::size_t n_rows = 0;
    std::size_t n_feat = 0;
};

// Expands and standardizes the training rows; fills the classifier's
// standardization parameters.
inline DesignMatrix build_design(const std::vector<const Point*>& rows, FeatureExpansion expansion,
                                 Classifier& clf) {
    DesignMatrix design;
    design.n_rows = rows.size();
    std::vector<std::vector<double>> expanded(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) expanded[r] = expand_features(*rows[r], expansion);
    design.n_feat = expanded.empty() ? 0 : expanded.front().size();

    clf.expansion = expansion;
    clf.feature_mean.assign(design.n_feat, 0.0);
    clf.feature_scale.assign(design.n_feat, 0.0);
    for (const auto& z : expanded)
        for (std::size_t j = 0; j < design.n_feat; ++j) clf.feature_mean[j] += z[j];
    for (double& m : clf.feature_mean) m /= design.n_rows;
    for (const auto& z : expanded)
        for (std::size_t j = 0; j < design.n_feat; ++j) {
            const double d = z[j] - clf.feature_mean[j];
            clf.feature_scale[j] += d * d;
        }
    for (double& s : clf.feature_scale) {
        s = std::sqrt(s / design.n_rows);
        if (s < 1e-12) s = 1.0;  // constant feature: leave it centered only
    }

    design.values.resize(design.n_rows * design.n_feat);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < design.n_feat; ++j)
            design.values[r * design.n_feat + j] =
                (expanded[r][j] - clf.feature_mean[j]) / clf.feature_scale[j];
    return design;
}

}  // namespace detail

// Trains the labeled-vs-unlabeled classifier on the whole dataset:
// component points labeled 1, mixture points labeled 0.
inline Classifier fit_classifier(const PUDataset& data, FeatureExpansion expansion,
                                 double l2 = 1e-4) {
    if (data.positives.empty() || data.unlabeled.empty())
        throw std::invalid_argument("classifier needs both samples non-empty");

    std::vector<const Point*> rows;
    std::vector<double> labels;
    rows.reserve(data.positives.size() + data.unlabeled.size());
    for (const auto& p : data.positives) {
        rows.push_back(&p);
        labels.push_back(1.0);
    }
    for (const auto& p : data.unlabeled) {
        rows.push_back(&p);
        labels.push_back(0.0);
    }

    Classifier clf;
    const auto design = detail::build_design(rows, expansion, clf);
    detail::fit_logistic(design.values, labels, design.n_rows, design.n_feat, l2, clf);
    return clf;
}

struct TransformResult {
    std::vector<double> tau_x1;  // out-of-fold scores of the component sample, input order
    std::vector<double> tau_x;   // out-of-fold scores of the mixture sample, input order
    std::vector<std::string> warnings;
};

namespace detail {

// Fold labels assigned in canonical (sorted) point order so that permuting
// the input permutes the scores identically; training rows are later fed to
// the optimizer in the same canonical order so even the floating-point
// accumulation order is permutation-independent. The label sequence itself
// is a balanced multiset shuffled with the seeded generator.
struct FoldAssignment {
    std::vector<int> fold_of;                 // by input index
    std::vector<std::size_t> canonical_order; // input indices sorted by point value
};

inline FoldAssignment assign_folds(const std::vector<Point>& points, int folds, Rng& rng) {
    const std::size_t n = points.size();
    FoldAssignment assignment;
    assignment.canonical_order.resize(n);
    std::iota(assignment.canonical_order.begin(), assignment.canonical_order.end(), 0);
    std::sort(assignment.canonical_order.begin(), assignment.canonical_order.end(),
              [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

    std::vector<int> sequence(n);
    for (std::size_t i = 0; i < n; ++i) sequence[i] = static_cast<int>(i % folds);
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform01() * (i + 1));
        std::swap(sequence[i], sequence[std::min(j, i)]);
    }

    assignment.fold_of.resize(n);
    for (std::size_t rank = 0; rank < n; ++rank)
        assignment.fold_of[assignment.canonical_order[rank]] = sequence[rank];
    return assignment;
}

}  // namespace detail

// Scores every point of both samples with a classifier trained on the other
// folds. Fold assignment is stratified (balanced separately over each
// sample) and seeded.
inline TransformResult cv_transform(const PUDataset& data, const TransformConfig& config) {
    TransformResult result;
    int folds = config.folds;
    if (folds < 2) throw std::invalid_argument("cv_transform needs at least 2 folds");
    const std::size_t smallest = std::min(data.positives.size(), data.unlabeled.size());
    if (static_cast<std::size_t>(folds) > smallest) {
        folds = static_cast<int>(smallest);
        result.warnings.push_back("reduced folds to " + std::to_string(folds) +
                                  " to keep every fold non-empty");
        if (folds < 2) throw std::invalid_argument("a sample is too small for cross-validation");
    }

    Rng rng_pos(derive_seed(config.seed, 0x706f73ULL));
    Rng rng_unl(derive_seed(config.seed, 0x756e6cULL));
    const auto pos = detail::assign_folds(data.positives, folds, rng_pos);
    const auto unl = detail::assign_folds(data.unlabeled, folds, rng_unl);

    result.tau_x1.assign(data.positives.size(), 0.0);
    result.tau_x.assign(data.unlabeled.size(), 0.0);

    for (int f = 0; f < folds; ++f) {
        std::vector<const Point*> rows;
        std::vector<double> labels;
        for (std::size_t i : pos.canonical_order)
            if (pos.fold_of[i] != f) {
                rows.push_back(&data.positives[i]);
                labels.push_back(1.0);
            }
        for (std::size_t i : unl.canonical_order)
            if (unl.fold_of[i] != f) {
                rows.push_back(&data.unlabeled[i]);
                labels.push_back(0.0);
            }

        Classifier clf;
        const auto design = detail::build_design(rows, config.expansion, clf);
        detail::fit_logistic(design.values, labels, design.n_rows, design.n_feat, config.l2, clf);
        if (!clf.converged)
            result.warnings.push_back("fold " + std::to_string(f) +
                                      " classifier stopped before reaching the gradient tolerance");

        for (std::size_t i = 0; i < data.positives.size(); ++i)
            if (pos.fold_of[i] == f) result.tau_x1[i] = clf.score(data.positives[i]);
        for (std::size_t i = 0; i < data.unlabeled.size(); ++i)
            if (unl.fold_of[i] == f) result.tau_x[i] = clf.score(data.unlabeled[i]);
    }
    return result;
}

// Class posterior from the labeled-vs-unlabeled score:
//   p(y=1 | x) = min(1, c_ratio * alpha_hat * tau / (1 - tau)),
// where c_ratio is |X| / |X1|.
inline double posterior(double tau, double alpha_hat, double c_ratio) {
    if (tau >= 1.0) throw std::invalid_argument("posterior requires tau < 1");
    if (alpha_hat < 0.0 || c_ratio < 0.0)
        throw std::invalid_argument("posterior requires nonnegative alpha and c_ratio");
    const double value = c_ratio * alpha_hat * tau / (1.0 - tau);
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace alphamax

#endif  // ALPHAMAX_TRANSFORM_HPP
