#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "bprank/experiments.hpp"
#include "bprank/synth.hpp"

using namespace bprank;

namespace {

// The metric columns: everything except timings.
bool same_metrics(const ResultRow& a, const ResultRow& b) {
    return a.experiment_id == b.experiment_id && a.algorithm == b.algorithm && a.dataset == b.dataset &&
           a.n1 == b.n1 && a.n0 == b.n0 && a.s == b.s && a.seed == b.seed && a.phi_risk == b.phi_risk &&
           a.auc == b.auc;
}

ExperimentPlan small_plan() {
    ExperimentPlan p;
    p.ks = {1};
    p.sigmas = {2.0};
    p.pair_sizes = {500, 1000, 3000, 5000};
    p.replicates = 5;
    p.n_per_class = 100;
    p.test_per_class = 200;
    p.dim = 4;
    return p;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("synthetic sweep row count") {
    const auto rows = run_synth_sweep(small_plan());
    CHECK(rows.size() == 5 * (1 + 4));
    std::map<std::string, int> per_alg;
    for (const auto& r : rows) {
        ++per_alg[r.algorithm];
        CHECK(r.auc >= 0.0);
        CHECK(r.auc <= 1.0);
        CHECK(r.wall_time_seconds >= 0.0);
        CHECK(r.find_extra("opt_phi_risk").has_value());
        CHECK(r.find_extra("pop_phi_risk").has_value());
    }
    CHECK(per_alg["bbr"] == 5);
    CHECK(per_alg["lcbr"] == 20);
}

TEST_CASE("synthetic sweep is deterministic") {
    auto p = small_plan();
    p.replicates = 2;
    const auto a = run_synth_sweep(p);
    const auto b = run_synth_sweep(p);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_metrics(a[i], b[i]));
}

TEST_CASE("skew sweep: one row per (rho, algorithm, replicate)") {
    ExperimentPlan p = small_plan();
    p.kind = PlanKind::SkewSweep;
    p.rhos = {0.1, 0.5, 0.9};
    p.pair_sizes = {500};
    p.replicates = 2;
    p.n_total = 200;
    const auto rows = run_skew_sweep(p);
    CHECK(rows.size() == 3 * 2 * 2);
    std::set<std::tuple<std::string, std::string, std::uint64_t>> keys;
    for (const auto& r : rows) keys.insert({r.find_extra("rho").value(), r.algorithm, r.seed});
    CHECK(keys.size() == rows.size());
    for (const auto& r : rows) CHECK(r.n1 + r.n0 == 200);
}

TEST_CASE("replicate seeds") {
    ExperimentPlan p;
    p.base_seed = 10;
    CHECK(replicate_seed(p, 0) == 10);
    CHECK(replicate_seed(p, 3) == 13);
}

TEST_CASE("plan validation") {
    ExperimentPlan p;
    p.replicates = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = ExperimentPlan{};
    p.ks.clear();
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = ExperimentPlan{};
    p.pair_sizes = {0};
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("libsvm compare rows") {
    const auto spec = random_gmm_spec(3, 1, 2.0, 1);
    const auto train = sample_dataset(spec, 100, 80, 2);
    const auto test = sample_dataset(spec, 50, 50, 3);
    ExperimentPlan p;
    p.kind = PlanKind::LibsvmCompare;
    p.sample_ratios = {0.5, 1.0};
    p.pair_sizes = {100, 400};
    p.replicates = 2;
    p.sgd_budget = 500;
    const auto rows = run_libsvm_compare(train, test, "toy", p);
    CHECK(rows.size() == 2 * 2 * (1 + 2 + 1));
    for (const auto& r : rows) {
        CHECK(r.dataset == "toy");
        CHECK(r.find_extra("sample_ratio").has_value());
    }
}

TEST_CASE("bounds table is the grid product") {
    BoundsGrid g;
    g.dims = {2, 10};
    g.ns = {1e3, 1e4};
    g.epsilons = {0.1, 0.2, 0.5};
    CHECK(run_bounds_table(g).size() == 12);
}

TEST_CASE("timing rows and rejection of S = 0") {
    TimingPlan t;
    t.n_per_class = 50;
    t.pair_sizes = {10, 100};
    t.repetitions = 1;
    const auto rows = run_timing(t);
    CHECK(rows.size() == 4);
    t.pair_sizes = {0};
    CHECK_THROWS_AS(run_timing(t), InvalidArgument);
}

TEST_CASE("lcbr_time_monotone") {
    ResultRow a, b;
    a.algorithm = b.algorithm = "lcbr";
    a.s = 10;
    b.s = 100;
    a.wall_time_seconds = 1.0;
    b.wall_time_seconds = 2.0;
    CHECK(lcbr_time_monotone({a, b}));
    b.wall_time_seconds = 0.5;
    CHECK_FALSE(lcbr_time_monotone({a, b}));
}

TEST_CASE("w_star selection returns a grid value") {
    const auto spec = random_gmm_spec(3, 1, 2.0, 4);
    const auto d = scale_to_ball(sample_dataset(spec, 100, 100, 5), 1.0);
    const std::vector<double> grid{0.5, 1.0, 10.0};
    const double w = select_w_star(d, grid, 0.2, 0, 6);
    CHECK(std::find(grid.begin(), grid.end(), w) != grid.end());
    CHECK(select_w_star(d, grid, 0.2, 0, 6) == w);
}

}
