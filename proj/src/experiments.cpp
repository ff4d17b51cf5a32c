#include "bprank/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "bprank/baseline.hpp"
#include "bprank/eval.hpp"
#include "bprank/moments.hpp"
#include "bprank/rng.hpp"
#include "bprank/synth.hpp"

namespace bprank {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

TrainOutcome solve_timed(const PairMoments& m, double accumulate_seconds, const ProblemConfig& cfg,
                         const SolverConfig& scfg) {
    const auto start = Clock::now();
    auto result = solve_erm(m, cfg, scfg);
    TrainOutcome out;
    out.solve_seconds = seconds_since(start);
    out.accumulate_seconds = accumulate_seconds;
    out.weights = std::move(result.weights);
    out.diagnostics = result.diagnostics;
    return out;
}

std::string fmt_tag(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

TrainOutcome train_bbr(const Dataset& data, const ProblemConfig& cfg, const SolverConfig& scfg, bool naive) {
    const auto start = Clock::now();
    const PairMoments m = naive ? batch_moments_naive(data) : batch_moments_fast(data);
    return solve_timed(m, seconds_since(start), cfg, scfg);
}

TrainOutcome train_lcbr(const Dataset& data, std::uint64_t s, std::uint64_t seed, const ProblemConfig& cfg,
                        const SolverConfig& scfg) {
    const auto start = Clock::now();
    const PairMoments m = subsample_moments(data, SubsampleConfig{s, seed});
    return solve_timed(m, seconds_since(start), cfg, scfg);
}

void ExperimentPlan::validate() const {
    if (replicates < 1) throw InvalidArgument("plan needs at least one replicate");
    if (dim < 1) throw InvalidArgument("plan dimension must be >= 1");
    if (!(w_star > 0.0) || !(x_star > 0.0)) throw InvalidArgument("plan radii must be positive");
    auto nonempty = [](bool ok, const char* what) {
        if (!ok) throw InvalidArgument(std::string("plan grid is empty: ") + what);
    };
    for (auto s : pair_sizes) {
        if (s == 0) throw InvalidArgument("pair sizes must be >= 1");
    }
    switch (kind) {
        case PlanKind::SyntheticSweep:
            nonempty(!ks.empty(), "k");
            nonempty(!sigmas.empty(), "sigma");
            nonempty(!pair_sizes.empty(), "pairs");
            if (n_per_class < 1 || test_per_class < 1) throw InvalidArgument("sample sizes must be >= 1");
            break;
        case PlanKind::SkewSweep:
            nonempty(!ks.empty(), "k");
            nonempty(!sigmas.empty(), "sigma");
            nonempty(!pair_sizes.empty(), "pairs");
            nonempty(!rhos.empty(), "rho");
            if (n_total < 2 || test_per_class < 1) throw InvalidArgument("skew sweep needs n_total >= 2");
            for (double r : rhos) {
                if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("rho values must lie in (0, 1)");
            }
            break;
        case PlanKind::LibsvmCompare:
            nonempty(!pair_sizes.empty(), "pairs");
            nonempty(!sample_ratios.empty(), "sample ratio");
            break;
        case PlanKind::BoundsTable:
            break;
    }
    for (auto k : ks) {
        if (k == 0) throw InvalidArgument("mixture component counts must be >= 1");
    }
    for (double s : sigmas) {
        if (!(s > 0.0)) throw InvalidArgument("sigma values must be positive");
    }
}

std::uint64_t replicate_seed(const ExperimentPlan& plan, std::size_t replicate) {
    return plan.base_seed + static_cast<std::uint64_t>(replicate);
}

namespace {

ResultRow make_row(const std::string& id, const std::string& algorithm, const std::string& dataset,
                   const Dataset& train, std::uint64_t s, std::uint64_t seed, const TrainOutcome& t,
                   const PairMoments& test_moments, const Dataset& test) {
    ResultRow row;
    row.experiment_id = id;
    row.algorithm = algorithm;
    row.dataset = dataset;
    row.n1 = train.n1();
    row.n0 = train.n0();
    row.s = s;
    row.seed = seed;
    row.phi_risk = expected_phi_risk(test_moments, t.weights);
    row.auc = auc_fast(test, t.weights);
    row.wall_time_seconds = t.accumulate_seconds + t.solve_seconds;
    row.add_extra("accumulate_seconds", t.accumulate_seconds);
    row.add_extra("solve_seconds", t.solve_seconds);
    row.add_extra("lambda", t.diagnostics.lambda);
    row.add_extra("w_norm", t.weights.norm());
    return row;
}

struct SynthContext {
    GmmSpec spec;
    Dataset test;
    PairMoments population;
    PairMoments test_moments;
    double opt_phi_risk = 0.0;
    double opt_auc = 0.0;
};

SynthContext synth_context(std::size_t dim, std::size_t k, double sigma, std::uint64_t seed_r,
                           std::size_t test_per_class, const ProblemConfig& cfg) {
    SynthContext c;
    c.spec = random_gmm_spec(dim, k, sigma, mix_seed(seed_r, 0));
    c.test = sample_dataset(c.spec, test_per_class, test_per_class, mix_seed(seed_r, 2));
    c.population = analytic_pair_moments(c.spec);
    c.test_moments = batch_moments_fast(c.test);
    const auto opt = solve_erm(c.population, cfg);
    c.opt_phi_risk = expected_phi_risk(c.population, opt.weights);
    c.opt_auc = auc_fast(c.test, opt.weights);
    return c;
}

void add_synth_extras(ResultRow& row, const SynthContext& c, const RankerWeights& w, double rho) {
    row.add_extra("k", static_cast<double>(c.spec.k));
    row.add_extra("sigma", c.spec.sigma);
    row.add_extra("dim", static_cast<double>(c.spec.dim));
    row.add_extra("rho", rho);
    row.add_extra("pop_phi_risk", expected_phi_risk(c.population, w));
    row.add_extra("opt_phi_risk", c.opt_phi_risk);
    row.add_extra("opt_auc", c.opt_auc);
}

}  // namespace

std::vector<ResultRow> run_synth_sweep(const ExperimentPlan& plan) {
    plan.validate();
    const ProblemConfig cfg{plan.x_star, plan.w_star};
    std::vector<ResultRow> rows;
    for (auto k : plan.ks) {
        for (double sigma : plan.sigmas) {
            for (std::size_t r = 0; r < plan.replicates; ++r) {
                const auto seed_r = replicate_seed(plan, r);
                const std::string id = "synth-k" + std::to_string(k) + "-sigma" + fmt_tag(sigma) + "-r" + std::to_string(r);
                try {
                    const auto ctx = synth_context(plan.dim, k, sigma, seed_r, plan.test_per_class, cfg);
                    const auto train = sample_dataset(ctx.spec, plan.n_per_class, plan.n_per_class, mix_seed(seed_r, 1));
                    const std::string name = "gmm";
                    const auto bbr = train_bbr(train, cfg);
                    rows.push_back(make_row(id, "bbr", name, train, 0, seed_r, bbr, ctx.test_moments, ctx.test));
                    add_synth_extras(rows.back(), ctx, bbr.weights, 0.5);
                    for (auto s : plan.pair_sizes) {
                        const auto lcbr = train_lcbr(train, s, mix_seed(seed_r, 3), cfg);
                        rows.push_back(make_row(id, "lcbr", name, train, s, seed_r, lcbr, ctx.test_moments, ctx.test));
                        add_synth_extras(rows.back(), ctx, lcbr.weights, 0.5);
                    }
                } catch (const Error& e) {
                    throw Error("synthetic sweep replicate " + id + " failed: " + e.what());
                }
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_skew_sweep(const ExperimentPlan& plan) {
    plan.validate();
    const ProblemConfig cfg{plan.x_star, plan.w_star};
    const auto s = plan.pair_sizes.back();
    std::vector<ResultRow> rows;
    for (auto k : plan.ks) {
        for (double sigma : plan.sigmas) {
            for (std::size_t r = 0; r < plan.replicates; ++r) {
                const auto seed_r = replicate_seed(plan, r);
                const auto ctx = synth_context(plan.dim, k, sigma, seed_r, plan.test_per_class, cfg);
                for (double rho : plan.rhos) {
                    const std::string id = "skew-k" + std::to_string(k) + "-sigma" + fmt_tag(sigma) + "-rho" +
                                           fmt_tag(rho) + "-r" + std::to_string(r);
                    try {
                        const auto total = static_cast<long long>(plan.n_total);
                        const auto n1 = std::clamp<long long>(std::llround(rho * static_cast<double>(total)), 1, total - 1);
                        const auto n0 = total - n1;
                        const auto train = sample_dataset(ctx.spec, static_cast<std::size_t>(n1),
                                                          static_cast<std::size_t>(n0), mix_seed(seed_r, 1));
                        const auto bbr = train_bbr(train, cfg);
                        rows.push_back(make_row(id, "bbr", "gmm", train, 0, seed_r, bbr, ctx.test_moments, ctx.test));
                        add_synth_extras(rows.back(), ctx, bbr.weights, rho);
                        const auto lcbr = train_lcbr(train, s, mix_seed(seed_r, 3), cfg);
                        rows.push_back(make_row(id, "lcbr", "gmm", train, s, seed_r, lcbr, ctx.test_moments, ctx.test));
                        add_synth_extras(rows.back(), ctx, lcbr.weights, rho);
                    } catch (const Error& e) {
                        throw Error("skew sweep replicate " + id + " failed: " + e.what());
                    }
                }
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_libsvm_compare(const Dataset& train, const Dataset& test, const std::string& name,
                                          const ExperimentPlan& plan) {
    plan.validate();
    require_trainable(train);
    require_trainable(test);
    if (train.dim != test.dim) throw DimensionMismatch("train and test sets have different dimensions");
    const ProblemConfig cfg{plan.x_star, plan.w_star};
    const double factor = ball_scale_factor(train, plan.x_star);
    const Dataset tr = scale(train, factor);
    const Dataset te = scale(test, factor);
    const PairMoments test_moments = batch_moments_fast(te);
    const auto budget = plan.sgd_budget ? plan.sgd_budget
                                        : *std::max_element(plan.pair_sizes.begin(), plan.pair_sizes.end());

    std::vector<ResultRow> rows;
    for (double ratio : plan.sample_ratios) {
        for (std::size_t r = 0; r < plan.replicates; ++r) {
            const auto seed_r = replicate_seed(plan, r);
            const std::string id = name + "-ratio" + fmt_tag(ratio) + "-r" + std::to_string(r);
            auto split = subsample_ratio_split(tr, ratio, mix_seed(seed_r, 5));
            if (split.warning) throw UntrainableDataset("libsvm compare " + id + ": " + *split.warning);
            const Dataset& part = split.data;
            auto tag = [&](ResultRow& row) {
                row.add_extra("sample_ratio", ratio);
                row.add_extra("scale", factor);
            };
            const auto bbr = train_bbr(part, cfg);
            rows.push_back(make_row(id, "bbr", name, part, 0, seed_r, bbr, test_moments, te));
            tag(rows.back());
            for (auto s : plan.pair_sizes) {
                const auto lcbr = train_lcbr(part, s, mix_seed(seed_r, 3), cfg);
                rows.push_back(make_row(id, "lcbr", name, part, s, seed_r, lcbr, test_moments, te));
                tag(rows.back());
            }
            if (plan.with_sgd) {
                const auto start = Clock::now();
                const auto tuned = tune_pairwise_sgd(part, SgdConfig{0.0, budget, mix_seed(seed_r, 4), plan.w_star});
                TrainOutcome t;
                t.weights = tuned.weights;
                t.accumulate_seconds = seconds_since(start);
                rows.push_back(make_row(id, "pairwise-sgd", name, part, budget, seed_r, t, test_moments, te));
                tag(rows.back());
                rows.back().add_extra("step_size", tuned.step_size);
            }
        }
    }
    return rows;
}

std::vector<BoundReport> run_bounds_table(const BoundsGrid& g) {
    std::vector<BoundReport> out;
    for (auto dim : g.dims)
        for (double x : g.x_stars)
            for (double w : g.w_stars)
                for (double rho : g.rhos)
                    for (double n : g.ns)
                        for (double sn : g.sigma_n_opnorms)
                            for (double eps : g.epsilons)
                                for (double delta : g.deltas) {
                                    out.push_back(evaluate_bounds(BoundInputs{dim, x, w, rho, n, sn, eps, delta}));
                                }
    return out;
}

std::vector<ResultRow> run_timing(const TimingPlan& plan) {
    if (plan.repetitions < 1) throw InvalidArgument("timing needs at least one repetition");
    if (plan.pair_sizes.empty()) throw InvalidArgument("timing needs at least one pair size");
    for (auto s : plan.pair_sizes) {
        if (s == 0) throw InvalidArgument("subsample size S must be >= 1");
    }
    const ProblemConfig cfg{1.0, plan.w_star};
    const auto spec = random_gmm_spec(plan.dim, 1, 2.0, mix_seed(plan.seed, 0));
    const auto data = sample_dataset(spec, plan.n_per_class, plan.n_per_class, mix_seed(plan.seed, 1));

    auto best_of = [&](auto&& accumulate) {
        double best_acc = std::numeric_limits<double>::infinity();
        double best_solve = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < plan.repetitions; ++rep) {
            const auto start = Clock::now();
            const PairMoments m = accumulate();
            best_acc = std::min(best_acc, seconds_since(start));
            const auto solve_start = Clock::now();
            (void)solve_erm(m, cfg);
            best_solve = std::min(best_solve, seconds_since(solve_start));
        }
        return std::pair{best_acc, best_solve};
    };
    auto row = [&](const std::string& algorithm, std::uint64_t s, std::pair<double, double> t) {
        ResultRow r;
        r.experiment_id = "timing-d" + std::to_string(plan.dim) + "-n" + std::to_string(plan.n_per_class);
        r.algorithm = algorithm;
        r.dataset = "gmm";
        r.n1 = data.n1();
        r.n0 = data.n0();
        r.s = s;
        r.seed = plan.seed;
        r.wall_time_seconds = t.first;
        r.add_extra("solve_seconds", t.second);
        r.add_extra("repetitions", static_cast<double>(plan.repetitions));
        return r;
    };

    std::vector<ResultRow> rows;
    if (plan.include_naive) rows.push_back(row("bbr-naive", 0, best_of([&] { return batch_moments_naive(data); })));
    rows.push_back(row("bbr-fast", 0, best_of([&] { return batch_moments_fast(data); })));
    for (auto s : plan.pair_sizes) {
        rows.push_back(row("lcbr", s, best_of([&] {
                               return subsample_moments(data, SubsampleConfig{s, mix_seed(plan.seed, 3)});
                           })));
    }
    // phi_risk/auc of the trained rankers are not timing data; report the
    // training-set values of the final solve for reference.
    for (auto& r : rows) {
        TrainOutcome t;
        if (r.algorithm == "lcbr") {
            t = train_lcbr(data, r.s, mix_seed(plan.seed, 3), cfg);
        } else {
            t = train_bbr(data, cfg);
        }
        r.phi_risk = phi_risk(data, t.weights);
        r.auc = auc_fast(data, t.weights);
    }
    return rows;
}

bool lcbr_time_monotone(const std::vector<ResultRow>& rows) {
    std::vector<std::pair<std::uint64_t, double>> lcbr;
    for (const auto& r : rows) {
        if (r.algorithm == "lcbr") lcbr.emplace_back(r.s, r.wall_time_seconds);
    }
    std::sort(lcbr.begin(), lcbr.end());
    for (std::size_t i = 1; i < lcbr.size(); ++i) {
        if (lcbr[i].second < lcbr[i - 1].second) return false;
    }
    return true;
}

namespace {

std::pair<Dataset, Dataset> holdout_split(const Dataset& data, double holdout_fraction, std::uint64_t seed) {
    Rng rng(seed);
    auto split_class = [&](const RowMatrix& m, RowMatrix& fit, RowMatrix& hold) {
        const auto n = static_cast<std::size_t>(m.rows());
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i + 1 < n; ++i) std::swap(idx[i], idx[i + static_cast<std::size_t>(rng.index(n - i))]);
        auto n_hold = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n)));
        n_hold = std::clamp<std::size_t>(n_hold, n > 1 ? 1 : 0, n > 1 ? n - 1 : 0);
        hold.resize(static_cast<Eigen::Index>(n_hold), m.cols());
        fit.resize(static_cast<Eigen::Index>(n - n_hold), m.cols());
        for (std::size_t i = 0; i < n; ++i) {
            const auto src = m.row(static_cast<Eigen::Index>(idx[i]));
            if (i < n_hold) {
                hold.row(static_cast<Eigen::Index>(i)) = src;
            } else {
                fit.row(static_cast<Eigen::Index>(i - n_hold)) = src;
            }
        }
    };
    Dataset fit, hold;
    fit.dim = hold.dim = data.dim;
    split_class(data.positives, fit.positives, hold.positives);
    split_class(data.negatives, fit.negatives, hold.negatives);
    return {std::move(fit), std::move(hold)};
}

}  // namespace

double select_w_star(const Dataset& train, const std::vector<double>& grid, double holdout_fraction,
                     std::uint64_t pairs, std::uint64_t seed) {
    if (grid.empty()) throw InvalidArgument("w_star grid is empty");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) throw InvalidArgument("holdout fraction must lie in (0, 1)");
    require_trainable(train);
    auto [fit, hold] = holdout_split(train, holdout_fraction, mix_seed(seed, 6));
    if (!fit.trainable() || !hold.trainable()) throw UntrainableDataset("w_star selection needs >= 2 samples per class");
    const PairMoments m = pairs ? subsample_moments(fit, SubsampleConfig{pairs, mix_seed(seed, 3)}) : batch_moments_fast(fit);
    double best_w = grid.front();
    double best_auc = -1.0;
    for (double w : grid) {
        const auto sol = solve_erm(m, ProblemConfig{1.0, w});
        const double auc = auc_fast(hold, sol.weights);
        if (auc > best_auc) {
            best_auc = auc;
            best_w = w;
        }
    }
    return best_w;
}

}  // namespace bprank
