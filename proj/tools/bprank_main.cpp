// bprank: train and evaluate pairwise-squared-loss bipartite rankers and run
// the experiment sweeps.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bprank/baseline.hpp"
#include "bprank/bounds.hpp"
#include "bprank/core.hpp"
#include "bprank/eval.hpp"
#include "bprank/experiments.hpp"
#include "bprank/io.hpp"
#include "bprank/model_file.hpp"
#include "bprank/rng.hpp"
#include "bprank/synth.hpp"

namespace {

using namespace bprank;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

// Relative output paths land in $BPRANK_OUTPUT_DIR when it is set.
std::string resolve_output(const std::string& path) {
    if (path.empty() || path == "-") return path;
    const char* dir = std::getenv("BPRANK_OUTPUT_DIR");
    std::filesystem::path p(path);
    if (dir == nullptr || *dir == '\0' || p.is_absolute()) return path;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / p).string();
}

void emit_rows(const std::string& out, const std::vector<ResultRow>& rows) {
    if (out.empty() || out == "-") {
        write_results_csv(std::cout, rows);
    } else {
        write_results_csv(resolve_output(out), rows);
    }
}

Dataset load_data(const std::string& path, std::size_t dim) {
    auto data = load_libsvm(path, dim ? std::optional<std::size_t>(dim) : std::nullopt);
    if (auto w = dense_dimension_warning(data.dim)) std::cerr << "warning: " << *w << "\n";
    return data;
}

std::string basename_of(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string data;
    std::string test;
    std::string model;
    std::string csv;
    std::string experiment_id = "train";
    double w_star = 1.0;
    double x_star = 1.0;
    std::uint64_t pairs = 0;
    std::uint64_t seed = 0;
    bool naive = false;
    std::size_t dim = 0;
    double sample_ratio = 1.0;
    double step_size = 0.0;  // 0: tune over the default grid
    std::uint64_t budget = 100000;
};

int run_train(const std::string& algorithm, const TrainArgs& a) {
    const ProblemConfig cfg{a.x_star, a.w_star};
    cfg.validate();
    Dataset train = load_data(a.data, a.dim);
    std::optional<Dataset> test;
    if (!a.test.empty()) {
        test = load_data(a.test, std::max(a.dim, train.dim));
        if (test->dim > train.dim) train = load_data(a.data, test->dim);
    }
    if (a.sample_ratio != 1.0) {
        auto split = subsample_ratio_split(train, a.sample_ratio, mix_seed(a.seed, 5));
        if (split.warning) throw UntrainableDataset(*split.warning);
        train = std::move(split.data);
    }
    const double factor = ball_scale_factor(train, a.x_star);
    train = scale(train, factor);
    if (test) *test = scale(*test, factor);

    TrainOutcome t;
    std::uint64_t s = 0;
    std::optional<double> step;
    if (algorithm == "bbr") {
        t = train_bbr(train, cfg, {}, a.naive);
    } else if (algorithm == "lcbr") {
        s = a.pairs;
        t = train_lcbr(train, a.pairs, a.seed, cfg);
    } else {
        s = a.budget;
        SgdConfig sc{a.step_size, a.budget, a.seed, a.w_star};
        const auto start = std::chrono::steady_clock::now();
        if (a.step_size > 0.0) {
            t.weights = train_pairwise_sgd(train, sc);
            step = a.step_size;
        } else {
            auto tuned = tune_pairwise_sgd(train, sc);
            t.weights = tuned.weights;
            step = tuned.step_size;
        }
        t.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    if (!a.model.empty()) save_model(resolve_output(a.model), ModelFile{a.w_star, t.weights});

    const Dataset& eval_set = test ? *test : train;
    const auto report = evaluate(eval_set, t.weights);
    ResultRow row;
    row.experiment_id = a.experiment_id;
    row.algorithm = algorithm == "sgd" ? "pairwise-sgd" : (algorithm == "bbr" && a.naive ? "bbr-naive" : algorithm);
    row.dataset = basename_of(test ? a.test : a.data);
    row.n1 = train.n1();
    row.n0 = train.n0();
    row.s = s;
    row.seed = a.seed;
    row.phi_risk = report.phi_risk;
    row.auc = report.auc;
    row.wall_time_seconds = t.accumulate_seconds + t.solve_seconds;
    row.add_extra("eval_on", test ? "test" : "train");
    row.add_extra("scale", factor);
    row.add_extra("w_star", a.w_star);
    row.add_extra("lambda", t.diagnostics.lambda);
    row.add_extra("constrained", t.diagnostics.constrained_active ? "1" : "0");
    row.add_extra("accumulate_seconds", t.accumulate_seconds);
    row.add_extra("solve_seconds", t.solve_seconds);
    if (step) row.add_extra("step_size", *step);
    emit_rows(a.csv, {row});
    return 0;
}

// ---------------------------------------------------------------- eval

int run_eval(const std::string& model_path, const std::string& data_path, double factor, const std::string& csv,
             const std::string& experiment_id) {
    const auto model = load_model(model_path);
    Dataset data = load_data(data_path, model.weights.dim());
    if (data.dim != model.weights.dim()) throw DimensionMismatch("dataset dimension exceeds model dimension");
    data = scale(data, factor);
    const auto report = evaluate(data, model.weights);
    ResultRow row;
    row.experiment_id = experiment_id;
    row.algorithm = "eval";
    row.dataset = basename_of(data_path);
    row.n1 = data.n1();
    row.n0 = data.n0();
    row.phi_risk = report.phi_risk;
    row.auc = report.auc;
    row.add_extra("auc_risk", report.auc_risk);
    row.add_extra("scale", factor);
    emit_rows(csv, {row});
    return 0;
}

// ---------------------------------------------------------------- validate

int run_validate(const std::string& data_path, double x_star, std::size_t dim) {
    const auto data = load_data(data_path, dim);
    const auto report = validate_dataset(data, ProblemConfig{x_star, 1.0});
    std::cout << "n1=" << data.n1() << " n0=" << data.n0() << " dim=" << data.dim
              << " max_norm=" << max_row_norm(data) << " violations=" << report.violations.size() << "\n";
    constexpr std::size_t kMaxListed = 20;
    for (std::size_t i = 0; i < report.violations.size() && i < kMaxListed; ++i) {
        const auto& v = report.violations[i];
        std::cout << to_string(v.kind) << " class=" << v.label << " row=" << v.index << " " << v.detail << "\n";
    }
    if (report.violations.size() > kMaxListed) {
        std::cout << "... " << report.violations.size() - kMaxListed << " more\n";
    }
    return report.ok() ? 0 : kExitData;
}

void add_plan_options(CLI::App* cmd, ExperimentPlan& plan) {
    cmd->add_option("--k", plan.ks, "Mixture component counts")->delimiter(',');
    cmd->add_option("--sigma", plan.sigmas, "Isotropic noise scales")->delimiter(',');
    cmd->add_option("--pairs", plan.pair_sizes, "LCBR subsample sizes S")->delimiter(',');
    cmd->add_option("--replicates", plan.replicates, "Replicates per grid point")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", plan.base_seed, "Base seed; replicate r uses seed + r");
    cmd->add_option("--dim", plan.dim, "Feature dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--test-size", plan.test_per_class, "Test samples per class");
    cmd->add_option("--w-star", plan.w_star, "Weight ball radius")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bprank: bipartite ranking with the pairwise squared loss (BBR / LCBR)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("bprank ") + "0.1.0");

    // train
    TrainArgs ta;
    auto* train = app.add_subcommand("train", "Train a linear ranker on a LIBSVM file");
    train->require_subcommand(1);
    std::string algorithm;
    auto add_common = [&](CLI::App* c) {
        c->add_option("data", ta.data, "Training data (LIBSVM format)")->required()->check(CLI::ExistingFile);
        c->add_option("--test", ta.test, "Evaluate on this LIBSVM file instead of the training data")
            ->check(CLI::ExistingFile);
        c->add_option("--model", ta.model, "Write the model file here");
        c->add_option("--csv", ta.csv, "Write the result row here (default: stdout)");
        c->add_option("--experiment-id", ta.experiment_id, "Experiment id column");
        c->add_option("--w-star", ta.w_star, "Weight ball radius")->check(CLI::PositiveNumber);
        c->add_option("--x-star", ta.x_star, "Feature ball radius used for global rescaling")->check(CLI::PositiveNumber);
        c->add_option("--dim", ta.dim, "Minimum feature dimension");
        c->add_option("--sample-ratio", ta.sample_ratio, "Fraction of training samples to keep (sample level)")
            ->check(CLI::Range(0.0, 1.0));
    };
    auto* bbr = train->add_subcommand("bbr", "All-pairs batch training");
    add_common(bbr);
    bbr->add_flag("--naive", ta.naive, "Use the literal all-pairs accumulation");
    bbr->add_option("--seed", ta.seed, "Seed for --sample-ratio");
    auto* lcbr = train->add_subcommand("lcbr", "Training on S uniformly subsampled pairs");
    add_common(lcbr);
    lcbr->add_option("--pairs", ta.pairs, "Subsample size S (pair level)")->required()->check(CLI::PositiveNumber);
    lcbr->add_option("--seed", ta.seed, "Pair sampling seed")->required();
    auto* sgd = train->add_subcommand("sgd", "Projected pairwise SGD baseline");
    add_common(sgd);
    sgd->add_option("--step-size", ta.step_size, "Fixed step size (default: tune over the built-in grid)");
    sgd->add_option("--budget", ta.budget, "Number of pair updates")->check(CLI::PositiveNumber);
    sgd->add_option("--seed", ta.seed, "Pair sampling seed");
    for (auto* c : {bbr, lcbr, sgd}) {
        c->callback([&algorithm, c] { algorithm = c->get_name(); });
    }

    // eval
    std::string model_path, eval_data, eval_csv, eval_id = "eval";
    double eval_scale = 1.0;
    auto* eval = app.add_subcommand("eval", "Evaluate a model file on a LIBSVM file");
    eval->add_option("model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    eval->add_option("data", eval_data, "LIBSVM data")->required()->check(CLI::ExistingFile);
    eval->add_option("--scale", eval_scale, "Feature scale factor from training (extra column 'scale')")
        ->check(CLI::PositiveNumber);
    eval->add_option("--csv", eval_csv, "Write the result row here (default: stdout)");
    eval->add_option("--experiment-id", eval_id, "Experiment id column");

    // validate
    std::string validate_data;
    double validate_x_star = 1.0;
    std::size_t validate_dim = 0;
    auto* validate = app.add_subcommand("validate", "Report dimension, finiteness and norm violations");
    validate->add_option("data", validate_data, "LIBSVM data")->required()->check(CLI::ExistingFile);
    validate->add_option("--x-star", validate_x_star, "Feature ball radius")->check(CLI::PositiveNumber);
    validate->add_option("--dim", validate_dim, "Minimum feature dimension");

    // synth-spec / synth-data
    std::size_t spec_dim = 10, spec_k = 1;
    double spec_sigma = 2.0;
    std::uint64_t spec_seed = 0;
    std::string spec_out;
    auto* synth_spec = app.add_subcommand("synth-spec", "Draw a random Gaussian-mixture spec");
    synth_spec->add_option("--dim", spec_dim, "Dimension")->check(CLI::PositiveNumber);
    synth_spec->add_option("--k", spec_k, "Components")->check(CLI::PositiveNumber);
    synth_spec->add_option("--sigma", spec_sigma, "Noise scale")->check(CLI::PositiveNumber);
    synth_spec->add_option("--seed", spec_seed, "Seed");
    synth_spec->add_option("--out", spec_out, "Output file (default: stdout)");

    std::string data_spec, data_out;
    std::size_t data_n1 = 1000, data_n0 = 1000;
    std::uint64_t data_seed = 0;
    auto* synth_data = app.add_subcommand("synth-data", "Sample a LIBSVM dataset from a mixture spec");
    synth_data->add_option("spec", data_spec, "Spec file")->required()->check(CLI::ExistingFile);
    synth_data->add_option("--n1", data_n1, "Positive samples")->check(CLI::PositiveNumber);
    synth_data->add_option("--n0", data_n0, "Negative samples")->check(CLI::PositiveNumber);
    synth_data->add_option("--seed", data_seed, "Seed");
    synth_data->add_option("--out", data_out, "Output file (default: stdout)");

    // sweeps
    ExperimentPlan synth_plan;
    std::string synth_out;
    auto* synth_sweep = app.add_subcommand("synth-sweep", "BBR vs LCBR on Gaussian mixtures over (K, sigma, S)");
    add_plan_options(synth_sweep, synth_plan);
    synth_sweep->add_option("--n", synth_plan.n_per_class, "Training samples per class")->check(CLI::PositiveNumber);
    synth_sweep->add_option("--out", synth_out, "CSV output (default: stdout)");

    ExperimentPlan skew_plan;
    skew_plan.kind = PlanKind::SkewSweep;
    skew_plan.ks = {1};
    skew_plan.sigmas = {2.0};
    skew_plan.pair_sizes = {5000};
    std::string skew_out;
    auto* skew_sweep = app.add_subcommand("skew-sweep", "BBR vs LCBR over label skew at fixed total N");
    add_plan_options(skew_sweep, skew_plan);
    skew_sweep->add_option("--rho", skew_plan.rhos, "Label skew grid")->delimiter(',');
    skew_sweep->add_option("--n-total", skew_plan.n_total, "Total training samples")->check(CLI::PositiveNumber);
    skew_sweep->add_option("--out", skew_out, "CSV output (default: stdout)");

    ExperimentPlan cmp_plan;
    cmp_plan.kind = PlanKind::LibsvmCompare;
    cmp_plan.pair_sizes = {100000};
    cmp_plan.replicates = 5;
    std::string cmp_train, cmp_test, cmp_out, cmp_name;
    std::size_t cmp_dim = 0;
    bool cmp_no_sgd = false;
    std::vector<double> cmp_w_grid;
    auto* compare = app.add_subcommand("libsvm-compare", "LCBR, BBR and pairwise-SGD on a LIBSVM train/test split");
    compare->add_option("train", cmp_train, "Training file")->required()->check(CLI::ExistingFile);
    compare->add_option("test", cmp_test, "Test file")->required()->check(CLI::ExistingFile);
    compare->add_option("--pairs", cmp_plan.pair_sizes, "LCBR subsample sizes S")->delimiter(',');
    compare->add_option("--sample-ratio", cmp_plan.sample_ratios, "Sample-level ratios")->delimiter(',');
    compare->add_option("--replicates", cmp_plan.replicates, "Replicates")->check(CLI::PositiveNumber);
    compare->add_option("--seed", cmp_plan.base_seed, "Base seed");
    compare->add_option("--w-star", cmp_plan.w_star, "Weight ball radius")->check(CLI::PositiveNumber);
    compare->add_option("--w-star-grid", cmp_w_grid, "Select w_star on a 20% holdout of the training file")
        ->delimiter(',');
    compare->add_option("--x-star", cmp_plan.x_star, "Feature ball radius")->check(CLI::PositiveNumber);
    compare->add_option("--sgd-budget", cmp_plan.sgd_budget, "SGD pair updates (default: largest S)");
    compare->add_flag("--no-sgd", cmp_no_sgd, "Skip the SGD baseline");
    compare->add_option("--dim", cmp_dim, "Minimum feature dimension");
    compare->add_option("--name", cmp_name, "Dataset name (default: training file name)");
    compare->add_option("--out", cmp_out, "CSV output (default: stdout)");

    BoundsGrid grid;
    std::string bounds_out;
    auto* bounds = app.add_subcommand("bounds-table", "Tabulate tail bounds and subsample requirements");
    bounds->add_option("--dim", grid.dims, "Dimensions")->delimiter(',');
    bounds->add_option("--x-star", grid.x_stars, "Feature radii")->delimiter(',');
    bounds->add_option("--w-star", grid.w_stars, "Weight radii")->delimiter(',');
    bounds->add_option("--rho", grid.rhos, "Label skews")->delimiter(',');
    bounds->add_option("--n", grid.ns, "Sample sizes N")->delimiter(',');
    bounds->add_option("--sigma-norm", grid.sigma_n_opnorms, "Spectral norms of Sigma_N")->delimiter(',');
    bounds->add_option("--epsilon", grid.epsilons, "Accuracies")->delimiter(',');
    bounds->add_option("--delta", grid.deltas, "Probability targets")->delimiter(',');
    bounds->add_option("--out", bounds_out, "CSV output (default: stdout)");

    TimingPlan timing_plan;
    std::string timing_out;
    bool timing_skip_naive = false;
    auto* timing = app.add_subcommand("timing", "Accumulation and solve times for BBR (naive, fast) and LCBR");
    timing->add_option("--dim", timing_plan.dim, "Dimension")->check(CLI::PositiveNumber);
    timing->add_option("--n", timing_plan.n_per_class, "Samples per class")->check(CLI::PositiveNumber);
    timing->add_option("--pairs", timing_plan.pair_sizes, "LCBR subsample sizes S (each >= 1)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    timing->add_option("--reps", timing_plan.repetitions, "Repetitions (minimum is reported)")
        ->check(CLI::PositiveNumber);
    timing->add_option("--seed", timing_plan.seed, "Seed");
    timing->add_flag("--skip-naive", timing_skip_naive, "Skip the all-pairs accumulation");
    timing->add_option("--out", timing_out, "CSV output (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*train) return run_train(algorithm, ta);
        if (*eval) return run_eval(model_path, eval_data, eval_scale, eval_csv, eval_id);
        if (*validate) return run_validate(validate_data, validate_x_star, validate_dim);
        if (*synth_spec) {
            const auto spec = random_gmm_spec(spec_dim, spec_k, spec_sigma, spec_seed);
            if (spec_out.empty() || spec_out == "-") {
                write_gmm_spec(std::cout, spec);
            } else {
                save_gmm_spec(resolve_output(spec_out), spec);
            }
            return 0;
        }
        if (*synth_data) {
            const auto data = sample_dataset(load_gmm_spec(data_spec), data_n1, data_n0, data_seed);
            if (data_out.empty() || data_out == "-") {
                write_libsvm(std::cout, data);
            } else {
                std::ofstream out(resolve_output(data_out));
                if (!out) throw Error("cannot open " + data_out + " for writing");
                write_libsvm(out, data);
            }
            return 0;
        }
        if (*synth_sweep) {
            emit_rows(synth_out, run_synth_sweep(synth_plan));
            return 0;
        }
        if (*skew_sweep) {
            emit_rows(skew_out, run_skew_sweep(skew_plan));
            return 0;
        }
        if (*compare) {
            cmp_plan.with_sgd = !cmp_no_sgd;
            auto train_set = load_data(cmp_train, cmp_dim);
            auto test_set = load_data(cmp_test, std::max(cmp_dim, train_set.dim));
            if (test_set.dim > train_set.dim) train_set = load_data(cmp_train, test_set.dim);
            if (!cmp_w_grid.empty()) {
                const auto scaled = scale_to_ball(train_set, cmp_plan.x_star);
                cmp_plan.w_star = select_w_star(scaled, cmp_w_grid, 0.2, cmp_plan.pair_sizes.front(), cmp_plan.base_seed);
                std::cerr << "selected w_star = " << cmp_plan.w_star << "\n";
            }
            emit_rows(cmp_out, run_libsvm_compare(train_set, test_set, cmp_name.empty() ? basename_of(cmp_train) : cmp_name,
                                                  cmp_plan));
            return 0;
        }
        if (*bounds) {
            const auto rows = run_bounds_table(grid);
            if (bounds_out.empty() || bounds_out == "-") {
                write_bounds_csv(std::cout, rows);
            } else {
                std::ofstream out(resolve_output(bounds_out));
                if (!out) throw Error("cannot open " + bounds_out + " for writing");
                write_bounds_csv(out, rows);
            }
            return 0;
        }
        if (*timing) {
            timing_plan.include_naive = !timing_skip_naive;
            const auto rows = run_timing(timing_plan);
            if (!lcbr_time_monotone(rows)) std::cerr << "warning: LCBR accumulation time is not monotone in S\n";
            emit_rows(timing_out, rows);
            return 0;
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidMoments& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << " (bracket [" << e.bracket_lo << ", " << e.bracket_hi
                  << "])\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
