#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bprank/bounds.hpp"
#include "bprank/core.hpp"
#include "bprank/io.hpp"
#include "bprank/solver.hpp"

namespace bprank {

// One trained ranker plus where the time went.
struct TrainOutcome {
    RankerWeights weights;
    SolveDiagnostics diagnostics;
    double accumulate_seconds = 0.0;
    double solve_seconds = 0.0;
};

// Batch training; `naive` selects the literal all-pairs accumulation.
TrainOutcome train_bbr(const Dataset& data, const ProblemConfig& cfg, const SolverConfig& scfg = {}, bool naive = false);

// Subsampled training with S pairs.
TrainOutcome train_lcbr(const Dataset& data, std::uint64_t s, std::uint64_t seed, const ProblemConfig& cfg,
                        const SolverConfig& scfg = {});

enum class PlanKind { SyntheticSweep, SkewSweep, LibsvmCompare, BoundsTable };

// Grids and replicate count of a sweep. Replicate r uses seed base_seed + r;
// streams inside a replicate are derived with mix_seed(seed_r, stream):
//   0 mixture spec, 1 training sample, 2 test sample, 3 LCBR pairs,
//   4 SGD pairs, 5 sample-ratio split.
// The same replicate seed is reused across grid points, so grid points are
// compared on common draws.
struct ExperimentPlan {
    PlanKind kind = PlanKind::SyntheticSweep;
    std::vector<std::size_t> ks{1, 2, 3};
    std::vector<double> sigmas{2.0, 3.0, 4.0};
    std::vector<std::uint64_t> pair_sizes{500, 1000, 3000, 5000};
    std::vector<double> rhos{0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
    std::vector<double> sample_ratios{0.1, 0.25, 0.5, 0.75, 1.0};
    std::size_t replicates = 50;
    std::uint64_t base_seed = 0;

    std::size_t dim = 10;
    std::size_t n_per_class = 1000;  // synthetic sweep
    std::size_t n_total = 2000;  // skew sweep
    std::size_t test_per_class = 10000;
    double w_star = 1.0;
    double x_star = 1.0;  // libsvm scaling
    std::uint64_t sgd_budget = 0;  // 0: largest pair size
    bool with_sgd = true;  // libsvm compare

    void validate() const;
};

std::uint64_t replicate_seed(const ExperimentPlan& plan, std::size_t replicate);

// Rows per (K, sigma, replicate): one "bbr" row, then one "lcbr" row per S.
// phi_risk/auc are measured on a fresh test draw; extras carry the population
// phi-risk (pop_phi_risk) and the analytic optimum (opt_phi_risk, opt_auc).
std::vector<ResultRow> run_synth_sweep(const ExperimentPlan& plan);

// Rows per (K, sigma, rho, replicate): "bbr" then "lcbr" with S =
// pair_sizes.back(), trained on round(rho N) positives and the rest negatives.
std::vector<ResultRow> run_skew_sweep(const ExperimentPlan& plan);

// Rows per (sample ratio, replicate): "bbr", one "lcbr" per S and, if
// enabled, "pairwise-sgd" (step size tuned on the training split). Both sets
// are scaled by the factor that puts the full training set in B2(x_star).
std::vector<ResultRow> run_libsvm_compare(const Dataset& train, const Dataset& test, const std::string& name,
                                          const ExperimentPlan& plan);

// Cartesian product of the given grids evaluated with evaluate_bounds.
struct BoundsGrid {
    std::vector<std::size_t> dims{10};
    std::vector<double> x_stars{1.0};
    std::vector<double> w_stars{1.0};
    std::vector<double> rhos{0.5};
    std::vector<double> ns{1e3, 1e4, 1e5};
    std::vector<double> sigma_n_opnorms{1.0};
    std::vector<double> epsilons{0.1, 0.5};
    std::vector<double> deltas{0.05};
};

std::vector<BoundReport> run_bounds_table(const BoundsGrid& grid);

struct TimingPlan {
    std::size_t dim = 10;
    std::size_t n_per_class = 1000;
    std::vector<std::uint64_t> pair_sizes{500, 1000, 3000, 5000};
    int repetitions = 3;
    std::uint64_t seed = 0;
    double w_star = 1.0;
    bool include_naive = true;
};

// Minimum over repetitions of accumulation time (wall_time_seconds) and
// solve time (extra solve_seconds) for "bbr-naive", "bbr-fast" and "lcbr"
// at every S, on a K=1, sigma=2 mixture sample. Runs sequentially.
std::vector<ResultRow> run_timing(const TimingPlan& plan);

// True when LCBR accumulation times in `rows` grow with S.
bool lcbr_time_monotone(const std::vector<ResultRow>& rows);

// Picks the radius with the best validation AUC: the training set is split
// (holdout_fraction of it held out), moments come from `pairs` subsampled
// pairs (0: fast batch) and every radius is solved on the same moments.
double select_w_star(const Dataset& train, const std::vector<double>& grid, double holdout_fraction,
                     std::uint64_t pairs, std::uint64_t seed);

}  // namespace bprank
