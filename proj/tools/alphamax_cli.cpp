// Command-line surface: `estimate` runs the estimators on CSV input,
// `gen` writes synthetic datasets, `bench` runs a declarative benchmark.
// JSON goes to stdout, files to --out, logs to stderr. Exit codes:
// 0 success, 1 validation/input failure, 2 estimator failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alphamax/bench.hpp"
#include "alphamax/csv.hpp"
#include "alphamax/estimators.hpp"
#include "alphamax/stats.hpp"
#include "alphamax/svg.hpp"
#include "alphamax/synthdata.hpp"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 1;
constexpr int kExitEstimator = 2;

json estimate_to_json(const alphamax::PriorEstimate& est) {
    json j;
    j["method"] = est.method == "cdf" ? "cdf-based" : est.method;
    j["alpha_hat"] = est.alpha_hat;
    j["transform_used"] = est.transform_used;
    j["low_confidence"] = est.low_confidence;
    j["warnings"] = est.warnings;
    return j;
}

struct EstimateArgs {
    std::string positives_path, unlabeled_path, data_path;
    std::string label_column = "0";
    std::string method = "alphamax";
    std::string transform_mode = "auto";
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int jobs = 0;
    // direct config overrides; NaN / sentinel means "not set on the CLI"
    std::optional<int> win, smooth_k, folds;
    std::optional<double> epsilon, pseudocount, l2;
    std::optional<std::string> expansion, weights;
};

alphamax::AlphaMaxConfig build_config(const EstimateArgs& args) {
    alphamax::AlphaMaxConfig config;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw std::invalid_argument("cannot open config: " + args.config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw std::invalid_argument("config: invalid JSON: " + std::string(e.what()));
        }
        alphamax::apply_config_json(j, config);
    }
    if (args.win) config.win = *args.win;
    if (args.smooth_k) config.smooth_k = *args.smooth_k;
    if (args.epsilon) config.epsilon = *args.epsilon;
    if (args.pseudocount) config.pseudocount = *args.pseudocount;
    if (args.folds) config.transform.folds = *args.folds;
    if (args.l2) config.transform.l2 = *args.l2;
    if (args.expansion)
        config.transform.expansion = alphamax::detail::parse_expansion(*args.expansion, "--expansion");
    if (args.weights) {
        if (*args.weights == "equal")
            config.weights = alphamax::LikelihoodWeights{1.0, 1.0};
        else if (*args.weights == "per-sample")
            config.weights.reset();
        else
            throw std::invalid_argument("--weights: expected 'equal' or 'per-sample'");
    }
    config.jobs = args.jobs;
    config.transform.seed = args.seed;

    if (args.transform_mode == "auto")
        config.transform_mode = alphamax::TransformMode::automatic;
    else if (args.transform_mode == "on")
        config.transform_mode = alphamax::TransformMode::on;
    else if (args.transform_mode == "off")
        config.transform_mode = alphamax::TransformMode::off;
    else
        throw std::invalid_argument("--transform: expected auto, on, or off");
    config.check();
    return config;
}

int run_estimate(const EstimateArgs& args) {
    alphamax::PUDataset data;
    alphamax::AlphaMaxConfig config;
    try {
        config = build_config(args);
        if (!args.data_path.empty())
            data = alphamax::load_csv(args.data_path, args.label_column);
        else if (!args.positives_path.empty() && !args.unlabeled_path.empty())
            data = alphamax::load_csv_pair(args.positives_path, args.unlabeled_path);
        else
            throw std::invalid_argument("provide --positives/--unlabeled or --data");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    std::vector<std::string> methods;
    if (args.method == "all")
        methods = {"alphamax", "pdf-ratio", "cdf", "gmm"};
    else if (args.method == "alphamax" || args.method == "pdf-ratio" || args.method == "cdf" ||
             args.method == "gmm")
        methods = {args.method};
    else {
        std::cerr << "error: unknown method '" << args.method << "'\n";
        return kExitValidation;
    }

    alphamax::PreparedSamples prepared;
    try {
        prepared = alphamax::prepare_univariate(data, config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEstimator;
    }

    try {
        std::vector<alphamax::PriorEstimate> estimates;
        for (const auto& m : methods)
            estimates.push_back(alphamax::run_method(m, prepared, config, args.seed));

        if (!args.out_dir.empty()) {
            std::filesystem::create_directories(args.out_dir);
            for (const auto& est : estimates) {
                if (est.method != "alphamax" || !est.curve) continue;
                alphamax::write_curve_csv(est, args.out_dir + "/curve.csv");
                std::ofstream svg(args.out_dir + "/curve.svg");
                svg << alphamax::render_curve_svg(est.curve->cs, est.curve->ells_normalized,
                                                  est.alpha_hat, data.true_alpha);
            }
            if (prepared.transform_used) {
                alphamax::write_tau_csv(prepared.x1, args.out_dir + "/tau_positives.csv");
                alphamax::write_tau_csv(prepared.x, args.out_dir + "/tau_unlabeled.csv");
            }
        }

        if (estimates.size() == 1) {
            std::cout << estimate_to_json(estimates.front()).dump(2) << '\n';
        } else {
            json doc;
            doc["estimates"] = json::array();
            for (const auto& est : estimates) doc["estimates"].push_back(estimate_to_json(est));
            std::cout << doc.dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEstimator;
    }
    return 0;
}

int run_gen(const std::string& family, double alpha, double delta_mu, bool delta_mu_set,
            std::size_t dim, bool dim_set, std::size_t n, std::size_t n1, std::uint64_t seed,
            const std::string& out_dir) {
    try {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("--alpha must lie strictly inside (0,1)");

        alphamax::PUDataset data;
        if (family == "gaussian") {
            if (dim_set) std::cerr << "warning: --dim ignored for this family\n";
            data = alphamax::gen_gaussian(alpha, delta_mu, n, n1, seed);
        } else if (family == "laplace") {
            if (dim_set) std::cerr << "warning: --dim ignored for this family\n";
            data = alphamax::gen_laplace(alpha, delta_mu, n, n1, seed);
        } else if (family == "ball") {
            if (delta_mu_set) std::cerr << "warning: --delta-mu ignored for this family\n";
            data = alphamax::gen_ball_in_box(alpha, dim, n, n1, seed);
        } else {
            throw std::invalid_argument("--family must be gaussian, laplace, or ball");
        }

        std::filesystem::create_directories(out_dir);
        alphamax::save_csv(data, out_dir + "/positives.csv", out_dir + "/unlabeled.csv");

        json meta;
        meta["family"] = family;
        meta["alpha"] = alpha;
        if (family != "ball") meta["delta_mu"] = delta_mu;
        if (family == "ball") meta["dim"] = dim;
        meta["n"] = n;
        meta["n1"] = n1;
        meta["seed"] = seed;
        meta["realized_alpha"] = alphamax::realized_alpha(data);
        std::ofstream out(out_dir + "/meta.json");
        if (!out) throw std::runtime_error("cannot write " + out_dir + "/meta.json");
        out << meta.dump(2) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}

int run_bench(const std::string& spec_path, int jobs, const std::string& out_dir, int trials_override) {
    alphamax::BenchSpec spec;
    try {
        spec = alphamax::load_bench_spec(spec_path);
        if (trials_override > 0) spec.trials = trials_override;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    try {
        const alphamax::BenchResults results = alphamax::run_trials(spec, jobs);
        std::filesystem::create_directories(out_dir);
        alphamax::write_trials_csv(results, out_dir + "/trials.csv");
        alphamax::write_summary_csv(results, spec.estimators, out_dir + "/summary.csv");
        alphamax::write_box_svgs(results, spec.estimators, out_dir);

        json doc;
        doc["trials"] = spec.trials;
        doc["cells"] = json::array();
        for (const auto& cell : results.summaries) {
            json c;
            c["config"] = cell.config;
            c["estimator"] = cell.estimator;
            if (std::isfinite(cell.mae)) c["mae"] = cell.mae;
            c["n_ok"] = cell.n_ok;
            c["n_failed"] = cell.n_failed;
            c["winner"] = cell.winner;
            doc["cells"].push_back(c);
        }
        std::cout << doc.dump(2) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEstimator;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"class prior estimation from positive and unlabeled data"};
    app.require_subcommand(1);

    // estimate
    EstimateArgs est_args;
    auto* estimate = app.add_subcommand("estimate", "estimate the class prior from CSV input");
    estimate->add_option("--positives", est_args.positives_path, "CSV of positive points");
    estimate->add_option("--unlabeled", est_args.unlabeled_path, "CSV of unlabeled points");
    estimate->add_option("--data", est_args.data_path, "single labeled CSV (label column: 1/0)");
    estimate->add_option("--label-column", est_args.label_column,
                         "label column name or index for --data (default 0)");
    estimate->add_option("--method", est_args.method, "alphamax|pdf-ratio|cdf|gmm|all");
    estimate->add_option("--transform", est_args.transform_mode, "auto|on|off (default auto)");
    estimate->add_option("--config", est_args.config_path, "JSON config file");
    estimate->add_option("--out", est_args.out_dir, "directory for curve CSV/SVG and tau exports");
    estimate->add_option("--seed", est_args.seed, "seed for folds and restarts");
    estimate->add_option("--jobs", est_args.jobs, "worker threads (0 = all cores)");
    std::optional<int> win, smooth_k, folds;
    std::optional<double> epsilon, pseudocount, l2;
    std::optional<std::string> expansion, weights;
    estimate->add_option("--win", win, "slope window in grid points");
    estimate->add_option("--smooth-k", smooth_k, "median smoothing half-width");
    estimate->add_option("--epsilon", epsilon, "knee heuristic epsilon");
    estimate->add_option("--pseudocount", pseudocount, "histogram smoothing pseudocount");
    estimate->add_option("--folds", folds, "cross-validation folds for the transform");
    estimate->add_option("--l2", l2, "classifier L2 strength");
    estimate->add_option("--expansion", expansion, "none|quadratic feature expansion");
    estimate->add_option("--weights", weights, "equal|per-sample likelihood weights");

    // gen
    std::string family;
    double alpha = 0.5, delta_mu = 1.0;
    std::size_t dim = 10, n = 10000, n1 = 1000;
    std::uint64_t seed = 1;
    std::string gen_out = ".";
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("--family", family, "gaussian|laplace|ball")->required();
    gen->add_option("--alpha", alpha, "true mixing proportion in (0,1)")->required();
    auto* delta_opt = gen->add_option("--delta-mu", delta_mu, "component separation");
    auto* dim_opt = gen->add_option("--dim", dim, "dimension (ball family)");
    gen->add_option("--n", n, "mixture sample size")->required();
    gen->add_option("--n1", n1, "component sample size")->required();
    gen->add_option("--seed", seed, "generator seed")->required();
    gen->add_option("--out", gen_out, "output directory")->required();

    // bench
    std::string spec_path, bench_out = ".";
    int bench_jobs = 0, trials_override = 0;
    auto* bench = app.add_subcommand("bench", "run a benchmark spec");
    bench->add_option("--spec", spec_path, "JSON benchmark spec")->required();
    bench->add_option("--jobs", bench_jobs, "worker threads (0 = all cores)");
    bench->add_option("--out", bench_out, "output directory");
    bench->add_option("--trials", trials_override, "override the spec's trial count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    if (estimate->parsed()) {
        est_args.win = win;
        est_args.smooth_k = smooth_k;
        est_args.folds = folds;
        est_args.epsilon = epsilon;
        est_args.pseudocount = pseudocount;
        est_args.l2 = l2;
        est_args.expansion = expansion;
        est_args.weights = weights;
        return run_estimate(est_args);
    }
    if (gen->parsed())
        return run_gen(family, alpha, delta_mu, delta_opt->count() > 0, dim, dim_opt->count() > 0,
                       n, n1, seed, gen_out);
    if (bench->parsed()) return run_bench(spec_path, bench_jobs, bench_out, trials_override);
    return kExitValidation;
}
