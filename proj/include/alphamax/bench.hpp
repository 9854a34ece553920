// Benchmark harness: repeated seeded trials over generator or CSV configs,
// mean absolute error per cell, and Bonferroni-corrected winner marking.

#ifndef ALPHAMAX_BENCH_HPP
#define ALPHAMAX_BENCH_HPP

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alphamax/estimators.hpp"
#include "alphamax/parallel.hpp"
#include "alphamax/stats.hpp"
#include "alphamax/svg.hpp"
#include "alphamax/synthdata.hpp"
#include "alphamax/types.hpp"

namespace alphamax {

struct BenchConfigEntry {
    std::string name;
    std::string family;  // gaussian | laplace | ball; empty = CSV input
    double alpha = 0.0;
    double delta_mu = 0.0;
    std::size_t dim = 10;
    std::size_t n = 10000;
    std::size_t n1 = 1000;
    std::string positives_path;
    std::string unlabeled_path;
    std::optional<double> true_alpha;
};

struct BenchSpec {
    int trials = 10;
    std::uint64_t base_seed = 1;
    std::vector<std::string> estimators;
    AlphaMaxConfig config;
    std::vector<BenchConfigEntry> configs;
};

struct TrialRow {
    std::string config;
    std::string estimator;
    int trial = 0;
    double alpha_hat = std::numeric_limits<double>::quiet_NaN();
    double abs_err = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0.0;
    std::string error;
};

struct CellSummary {
    std::string config;
    std::string estimator;
    double mae = std::numeric_limits<double>::quiet_NaN();
    int n_ok = 0;
    int n_failed = 0;
    bool winner = false;  // lowest MAE and significant against all others
};

struct BenchResults {
    std::vector<TrialRow> rows;
    std::vector<CellSummary> summaries;
};

namespace detail {

inline FeatureExpansion parse_expansion(const std::string& s, const std::string& where) {
    if (s == "none") return FeatureExpansion::none;
    if (s == "quadratic") return FeatureExpansion::quadratic;
    throw std::invalid_argument(where + ": expected 'none' or 'quadratic', got '" + s + "'");
}

template <typename T>
T json_get(const nlohmann::json& j, const std::string& key, const T& fallback,
           const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(where + "." + key + ": wrong type");
    }
}

}  // namespace detail

// Reads AlphaMaxConfig fields from a JSON object; missing fields keep their
// current values. Shared by the bench spec and the --config file.
inline void apply_config_json(const nlohmann::json& j, AlphaMaxConfig& config,
                              const std::string& where = "config") {
    using detail::json_get;
    config.grid_start = json_get(j, "grid_start", config.grid_start, where);
    config.grid_stop = json_get(j, "grid_stop", config.grid_stop, where);
    config.grid_step = json_get(j, "grid_step", config.grid_step, where);
    config.smooth_k = json_get(j, "smooth_k", config.smooth_k, where);
    config.win = json_get(j, "win", config.win, where);
    config.epsilon = json_get(j, "epsilon", config.epsilon, where);
    config.pseudocount = json_get(j, "pseudocount", config.pseudocount, where);
    config.solver_tol = json_get(j, "solver_tol", config.solver_tol, where);
    config.solver_max_iter = json_get(j, "solver_max_iter", config.solver_max_iter, where);
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        LikelihoodWeights lw;
        lw.gamma = detail::json_get(w, "gamma", 1.0, where + ".weights");
        lw.gamma1 = detail::json_get(w, "gamma1", 1.0, where + ".weights");
        config.weights = lw;
    }
    if (j.contains("transform")) {
        const auto& t = j.at("transform");
        config.transform.folds = detail::json_get(t, "folds", config.transform.folds, where + ".transform");
        config.transform.l2 = detail::json_get(t, "l2", config.transform.l2, where + ".transform");
        if (t.contains("expansion"))
            config.transform.expansion = detail::parse_expansion(
                t.at("expansion").get<std::string>(), where + ".transform.expansion");
    }
}

inline BenchSpec parse_bench_spec(const nlohmann::json& j) {
    BenchSpec spec;
    spec.trials = detail::json_get(j, "trials", 10, "spec");
    if (spec.trials < 1) throw std::invalid_argument("spec.trials: must be at least 1");
    spec.base_seed = detail::json_get<std::uint64_t>(j, "base_seed", 1, "spec");

    if (!j.contains("estimators") || !j.at("estimators").is_array() || j.at("estimators").empty())
        throw std::invalid_argument("spec.estimators: must be a non-empty array");
    for (const auto& e : j.at("estimators")) spec.estimators.push_back(e.get<std::string>());

    apply_config_json(j, spec.config, "spec");

    if (!j.contains("configs") || !j.at("configs").is_array() || j.at("configs").empty())
        throw std::invalid_argument("spec.configs: must be a non-empty array");
    std::size_t idx = 0;
    for (const auto& c : j.at("configs")) {
        const std::string where = "spec.configs[" + std::to_string(idx++) + "]";
        BenchConfigEntry entry;
        entry.name = detail::json_get<std::string>(c, "name", "", where);
        if (c.contains("family")) {
            entry.family = c.at("family").get<std::string>();
            if (entry.family != "gaussian" && entry.family != "laplace" && entry.family != "ball")
                throw std::invalid_argument(where + ".family: unknown family '" + entry.family + "'");
            if (!c.contains("alpha")) throw std::invalid_argument(where + ".alpha: missing");
            entry.alpha = c.at("alpha").get<double>();
            if (!(entry.alpha > 0.0 && entry.alpha < 1.0))
                throw std::invalid_argument(where + ".alpha: must lie in (0,1)");
            entry.delta_mu = detail::json_get(c, "delta_mu", 0.0, where);
            entry.dim = detail::json_get<std::size_t>(c, "dim", 10, where);
            entry.n = detail::json_get<std::size_t>(c, "n", 10000, where);
            entry.n1 = detail::json_get<std::size_t>(c, "n1", 1000, where);
            entry.true_alpha = entry.alpha;
        } else if (c.contains("positives") && c.contains("unlabeled")) {
            entry.positives_path = c.at("positives").get<std::string>();
            entry.unlabeled_path = c.at("unlabeled").get<std::string>();
            if (c.contains("true_alpha")) entry.true_alpha = c.at("true_alpha").get<double>();
        } else {
            throw std::invalid_argument(where + ": needs either 'family' or 'positives'+'unlabeled'");
        }
        if (entry.name.empty())
            entry.name = entry.family.empty() ? entry.positives_path
                                              : entry.family + "_a" + std::to_string(entry.alpha);
        spec.configs.push_back(std::move(entry));
    }
    return spec;
}

inline BenchSpec load_bench_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("spec: invalid JSON: " + std::string(e.what()));
    }
    return parse_bench_spec(j);
}

inline PUDataset generate_for_entry(const BenchConfigEntry& entry, std::uint64_t seed) {
    if (entry.family == "gaussian") return gen_gaussian(entry.alpha, entry.delta_mu, entry.n, entry.n1, seed);
    if (entry.family == "laplace") return gen_laplace(entry.alpha, entry.delta_mu, entry.n, entry.n1, seed);
    if (entry.family == "ball") return gen_ball_in_box(entry.alpha, entry.dim, entry.n, entry.n1, seed);
    throw std::invalid_argument("unknown family: " + entry.family);
}

// Runs every (config, trial, estimator) cell. Trials are the parallel unit;
// the estimators inside a trial share one prepared (possibly transformed)
// sample pair, and every trial derives its own seed, so results do not
// depend on the worker count.
inline BenchResults run_trials(const BenchSpec& spec, int jobs = 0) {
    if (spec.estimators.empty()) throw std::invalid_argument("estimator list is empty");
    spec.config.check();

    const std::size_t n_est = spec.estimators.size();
    const std::size_t n_tasks = spec.configs.size() * static_cast<std::size_t>(spec.trials);
    BenchResults results;
    results.rows.resize(n_tasks * n_est);

    // CSV-backed configs load once up front.
    std::vector<std::optional<PUDataset>> csv_data(spec.configs.size());
    for (std::size_t c = 0; c < spec.configs.size(); ++c)
        if (spec.configs[c].family.empty())
            csv_data[c] = load_csv_pair(spec.configs[c].positives_path, spec.configs[c].unlabeled_path);

    parallel_for_index(n_tasks, jobs, [&](std::size_t task) {
        const std::size_t c = task / spec.trials;
        const int trial = static_cast<int>(task % spec.trials);
        const BenchConfigEntry& entry = spec.configs[c];
        const std::uint64_t trial_seed = derive_seed(spec.base_seed, c, trial);

        AlphaMaxConfig config = spec.config;
        config.jobs = 1;  // parallelism lives at the trial level here
        config.transform.seed = trial_seed;

        PreparedSamples prepared;
        std::string prepare_error;
        try {
            const PUDataset data =
                entry.family.empty() ? *csv_data[c] : generate_for_entry(entry, trial_seed);
            prepared = prepare_univariate(data, config);
        } catch (const std::exception& e) {
            prepare_error = e.what();
        }

        for (std::size_t e = 0; e < n_est; ++e) {
            TrialRow& row = results.rows[task * n_est + e];
            row.config = entry.name;
            row.estimator = spec.estimators[e];
            row.trial = trial;
            const auto t0 = std::chrono::steady_clock::now();
            if (!prepare_error.empty()) {
                row.error = prepare_error;
            } else {
                try {
                    const PriorEstimate est = run_method(spec.estimators[e], prepared, config, trial_seed);
                    row.alpha_hat = est.alpha_hat;
                    if (entry.true_alpha) row.abs_err = std::abs(est.alpha_hat - *entry.true_alpha);
                } catch (const std::exception& ex) {
                    row.error = ex.what();
                }
            }
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        }
    });

    // Aggregate per (config, estimator), preserving spec order.
    for (const auto& entry : spec.configs) {
        std::vector<std::vector<double>> errors(n_est);
        std::vector<CellSummary> cells(n_est);
        for (std::size_t e = 0; e < n_est; ++e) {
            cells[e].config = entry.name;
            cells[e].estimator = spec.estimators[e];
        }
        for (const auto& row : results.rows) {
            if (row.config != entry.name) continue;
            for (std::size_t e = 0; e < n_est; ++e) {
                if (row.estimator != spec.estimators[e]) continue;
                if (!row.error.empty())
                    ++cells[e].n_failed;
                else if (std::isfinite(row.abs_err)) {
                    ++cells[e].n_ok;
                    errors[e].push_back(row.abs_err);
                }
            }
        }
        for (std::size_t e = 0; e < n_est; ++e)
            if (!errors[e].empty()) cells[e].mae = mean_abs_error(errors[e], 0.0);

        // Winner: lowest MAE, starred only when significant against every
        // other estimator at 0.05 / (number of comparisons).
        std::size_t best = n_est;
        for (std::size_t e = 0; e < n_est; ++e)
            if (errors[e].size() >= 2 && (best == n_est || cells[e].mae < cells[best].mae)) best = e;
        if (best != n_est) {
            int comparisons = 0;
            for (std::size_t e = 0; e < n_est; ++e)
                if (e != best && errors[e].size() >= 2) ++comparisons;
            bool significant = comparisons > 0;
            for (std::size_t e = 0; e < n_est && significant; ++e) {
                if (e == best || errors[e].size() < 2) continue;
                const double p = welch_t_test(errors[best], errors[e]).p_value;
                if (!(p < 0.05 / comparisons)) significant = false;
            }
            cells[best].winner = significant;
        }
        results.summaries.insert(results.summaries.end(), cells.begin(), cells.end());
    }
    return results;
}

inline void write_trials_csv(const BenchResults& results, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "config,estimator,trial,alpha_hat,abs_err,wall_ms,error\n";
    for (const auto& row : results.rows) {
        out << row.config << ',' << row.estimator << ',' << row.trial << ','
            << (std::isfinite(row.alpha_hat) ? format_value(row.alpha_hat) : "") << ','
            << (std::isfinite(row.abs_err) ? format_value(row.abs_err) : "") << ','
            << format_value(row.wall_ms) << ',' << row.error << '\n';
    }
}

inline void write_summary_csv(const BenchResults& results, const std::vector<std::string>& estimators,
                              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "config";
    for (const auto& e : estimators) out << ',' << e;
    out << '\n';

    std::vector<std::string> config_order;
    for (const auto& cell : results.summaries)
        if (config_order.empty() || config_order.back() != cell.config)
            config_order.push_back(cell.config);

    for (const auto& name : config_order) {
        out << name;
        for (const auto& e : estimators) {
            out << ',';
            for (const auto& cell : results.summaries)
                if (cell.config == name && cell.estimator == e) {
                    if (std::isfinite(cell.mae)) out << format_value(cell.mae) << (cell.winner ? "*" : "");
                    break;
                }
        }
        out << '\n';
    }
}

inline void write_box_svgs(const BenchResults& results, const std::vector<std::string>& estimators,
                           const std::string& dir) {
    std::vector<std::string> config_order;
    for (const auto& cell : results.summaries)
        if (config_order.empty() || config_order.back() != cell.config)
            config_order.push_back(cell.config);

    for (const auto& name : config_order) {
        std::vector<BoxStats> boxes;
        for (const auto& e : estimators) {
            std::vector<double> errs;
            for (const auto& row : results.rows)
                if (row.config == name && row.estimator == e && row.error.empty() &&
                    std::isfinite(row.abs_err))
                    errs.push_back(row.abs_err);
            if (!errs.empty()) boxes.push_back(box_stats(e, errs));
        }
        if (boxes.empty()) continue;
        std::string safe = name;
        for (char& ch : safe)
            if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
        std::ofstream out(dir + "/box_" + safe + ".svg");
        if (!out) throw std::runtime_error("cannot write box plot for " + name);
        out << render_box_svg(name, boxes);
    }
}

}  // namespace alphamax

#endif  // ALPHAMAX_BENCH_HPP
