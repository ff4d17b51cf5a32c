#include <doctest.h>

#include <cmath>
#include <random>

#include "bprank/baseline.hpp"
#include "bprank/eval.hpp"
#include "bprank/experiments.hpp"
#include "bprank/synth.hpp"
#include "oracles.hpp"

using namespace bprank;

TEST_SUITE("baseline") {

TEST_CASE("zero step returns w = 0") {
    std::mt19937_64 gen(1);
    const auto d = oracle::random_dataset(gen, 3, 10, 10);
    CHECK(train_pairwise_sgd(d, SgdConfig{0.0, 100, 1, 1.0}).w.isZero(0.0));
}

TEST_CASE("single pair: residual contracts to zero") {
    // d = 0.5, so each step multiplies the residual 1 - w d by (1 - eta d^2).
    const auto data = Dataset::from_rows({{0.25}}, {{-0.25}}, 1);
    const double eta = 0.1;
    const std::uint64_t steps = 2000;
    const auto w = train_pairwise_sgd(data, SgdConfig{eta, steps, 0, 10.0}).w[0];
    const double predicted = 1.0 - std::pow(1.0 - eta * 0.25, static_cast<double>(steps));
    CHECK(w * 0.5 == doctest::Approx(predicted).epsilon(1e-12));
    CHECK(std::abs(1.0 - w * 0.5) < 1e-12);
}

TEST_CASE("every run stays in the ball") {
    std::mt19937_64 gen(2);
    const auto d = oracle::random_dataset(gen, 4, 20, 15);
    for (double eta : default_step_grid()) {
        for (double w_star : {0.1, 1.0, 5.0}) {
            CHECK(train_pairwise_sgd(d, SgdConfig{eta, 500, 3, w_star}).w.norm() <= w_star * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("deterministic in seed") {
    std::mt19937_64 gen(3);
    const auto d = oracle::random_dataset(gen, 3, 10, 10);
    CHECK(train_pairwise_sgd(d, SgdConfig{0.1, 300, 7, 1.0}).w == train_pairwise_sgd(d, SgdConfig{0.1, 300, 7, 1.0}).w);
}

TEST_CASE("invalid config") {
    CHECK_THROWS_AS((SgdConfig{-0.1, 10, 0, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((SgdConfig{0.1, 0, 0, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((SgdConfig{0.1, 10, 0, 0.0}.validate()), InvalidArgument);
}

TEST_CASE("tuning picks the grid step with the lowest training risk") {
    const auto spec = random_gmm_spec(5, 1, 2.0, 4);
    const auto d = scale_to_ball(sample_dataset(spec, 200, 200, 5), 1.0);
    SgdConfig cfg{0.0, 2000, 6, 1.0};
    const auto t = tune_pairwise_sgd(d, cfg);
    double best = 1e300;
    for (double eta : default_step_grid()) {
        cfg.step_size = eta;
        best = std::min(best, phi_risk(d, train_pairwise_sgd(d, cfg)));
    }
    CHECK(t.train_phi_risk == best);
    CHECK(phi_risk(d, t.weights) == best);
}

TEST_CASE("with a large budget SGD approaches the batch solution") {
    const auto spec = random_gmm_spec(5, 1, 2.0, 7);
    const auto d = scale_to_ball(sample_dataset(spec, 300, 300, 8), 1.0);
    const ProblemConfig cfg{1.0, 1.0};
    const double batch = phi_risk(d, train_bbr(d, cfg).weights);
    const auto sgd = tune_pairwise_sgd(d, SgdConfig{0.0, 100000, 9, 1.0});
    CHECK(sgd.train_phi_risk >= batch - 1e-12);
    CHECK(sgd.train_phi_risk <= batch + 0.01);
}

}
