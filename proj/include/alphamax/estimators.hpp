// Dataset-level entry points: apply the classifier transform when the input
// is multivariate, then dispatch to the requested estimator.

#ifndef ALPHAMAX_ESTIMATORS_HPP
#define ALPHAMAX_ESTIMATORS_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphamax/alphamax.hpp"
#include "alphamax/baselines.hpp"
#include "alphamax/csv.hpp"
#include "alphamax/transform.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

// Univariate samples ready for the estimators, after the transform step if
// one was needed.
struct PreparedSamples {
    std::vector<double> x1;
    std::vector<double> x;
    bool transform_used = false;
    std::vector<std::string> warnings;
};

inline PreparedSamples prepare_univariate(const PUDataset& data, const AlphaMaxConfig& config) {
    const auto findings = validate(data);
    if (!findings.empty()) throw std::invalid_argument("invalid dataset: " + findings.front());

    PreparedSamples prepared;
    const bool want_transform = config.transform_mode == TransformMode::on ||
                                (config.transform_mode == TransformMode::automatic && data.dim > 1);
    if (!want_transform) {
        if (data.dim > 1) throw std::invalid_argument("multivariate input requires transform");
        prepared.x1 = PUDataset::column(data.positives);
        prepared.x = PUDataset::column(data.unlabeled);
        return prepared;
    }
    auto transformed = cv_transform(data, config.transform);
    prepared.x1 = std::move(transformed.tau_x1);
    prepared.x = std::move(transformed.tau_x);
    prepared.transform_used = true;
    prepared.warnings = std::move(transformed.warnings);
    return prepared;
}

// Runs one estimator by its method tag on prepared univariate samples.
inline PriorEstimate run_method(const std::string& method, const PreparedSamples& prepared,
                                const AlphaMaxConfig& config, std::uint64_t seed = 0) {
    PriorEstimate estimate;
    if (method == "alphamax") {
        estimate = estimate_alphamax_univariate(prepared.x1, prepared.x, config);
    } else if (method == "pdf-ratio") {
        const auto model = build_histogram(prepared.x1, prepared.x, config.pseudocount);
        estimate = pdf_ratio_estimate(model, prepared.x1);
    } else if (method == "cdf" || method == "cdf-based") {
        estimate = cdf_based_estimate(prepared.x, prepared.x1);
    } else if (method == "gmm") {
        estimate = gmm_em_estimate(prepared.x, prepared.x1, 5, 1e-8, 1000, seed);
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    estimate.transform_used = prepared.transform_used;
    estimate.warnings.insert(estimate.warnings.end(), prepared.warnings.begin(),
                             prepared.warnings.end());
    return estimate;
}

// The level-set pipeline on a dataset; multivariate input goes through the
// classifier transform first.
inline PriorEstimate estimate_alphamax(const PUDataset& data, const AlphaMaxConfig& config) {
    return run_method("alphamax", prepare_univariate(data, config), config);
}

// Writes the curve stages as CSV: c, ell_raw, ell_corrected, ell_smoothed,
// ell_normalized, heuristic (heuristic blank where the slope windows do not
// fit).
inline void write_curve_csv(const PriorEstimate& estimate, const std::string& path) {
    if (!estimate.curve) throw std::invalid_argument("estimate carries no curve");
    const LevelSetCurve& curve = *estimate.curve;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);

    out << "c,ell_raw,ell_corrected,ell_smoothed,ell_normalized,heuristic\n";
    std::size_t trace_pos = 0;
    for (std::size_t j = 0; j < curve.cs.size(); ++j) {
        out << format_value(curve.cs[j]) << ',' << format_value(curve.ells_raw[j]) << ','
            << format_value(curve.ells[j]) << ',';
        out << (j < curve.ells_smoothed.size() ? format_value(curve.ells_smoothed[j]) : "") << ',';
        out << (j < curve.ells_normalized.size() ? format_value(curve.ells_normalized[j]) : "")
            << ',';
        if (trace_pos < estimate.heuristic_trace.size() &&
            estimate.heuristic_trace[trace_pos].first == curve.cs[j]) {
            out << format_value(estimate.heuristic_trace[trace_pos].second);
            ++trace_pos;
        }
        out << '\n';
    }
}

// Writes out-of-fold transform scores as (id, tau) rows.
inline void write_tau_csv(const std::vector<double>& taus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "id,tau\n";
    for (std::size_t i = 0; i < taus.size(); ++i)
        out << i << ',' << format_value(taus[i]) << '\n';
}

}  // namespace alphamax

#endif  // ALPHAMAX_ESTIMATORS_HPP
