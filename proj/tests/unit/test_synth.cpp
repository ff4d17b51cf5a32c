#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bprank/eval.hpp"
#include "bprank/moments.hpp"
#include "bprank/synth.hpp"
#include "oracles.hpp"

using namespace bprank;

TEST_SUITE("synth") {

TEST_CASE("k = 1 has one mean per class and weight 1") {
    const auto s = random_gmm_spec(4, 1, 2.0, 3);
    CHECK(s.means_pos.size() == 1);
    CHECK(s.means_neg.size() == 1);
    CHECK(s.weights == std::vector<double>{1.0});
}

TEST_CASE("same seed gives the same spec and data") {
    const auto a = random_gmm_spec(3, 2, 1.0, 9);
    const auto b = random_gmm_spec(3, 2, 1.0, 9);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(a.means_pos[k] == b.means_pos[k]);
        CHECK(a.means_neg[k] == b.means_neg[k]);
    }
    const auto da = sample_dataset(a, 20, 30, 4);
    const auto db = sample_dataset(a, 20, 30, 4);
    CHECK(da.positives == db.positives);
    CHECK(da.negatives == db.negatives);
}

TEST_CASE("means lie in the orthant unit cubes") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = random_gmm_spec(2, 3, 1.0, seed);
        double sum = 0.0;
        for (double c : s.weights) sum += c;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK((s.means_pos[k].array() >= 0.0).all());
            CHECK((s.means_pos[k].array() <= 1.0).all());
            CHECK((s.means_neg[k].array() >= -1.0).all());
            CHECK((s.means_neg[k].array() <= 0.0).all());
        }
    }
}

TEST_CASE("vanishing noise puts samples on the mean") {
    const auto s = random_gmm_spec(3, 1, 1e-9, 5);
    const auto d = sample_dataset(s, 50, 50, 6);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK((d.positives.row(i).transpose() - s.means_pos[0]).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK((d.negatives.row(i).transpose() - s.means_neg[0]).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("sample mean is within 4 sigma / sqrt(n) of the mixture mean") {
    const auto s = random_gmm_spec(3, 1, 2.0, 8);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto d = sample_dataset(s, 1000, 1, seed);
        const Vector mean = d.positives.colwise().mean().transpose();
        CHECK((mean - s.means_pos[0]).cwiseAbs().maxCoeff() <= 4.0 * 2.0 / std::sqrt(1000.0));
    }
}

TEST_CASE("n1 or n0 of zero is rejected") {
    const auto s = random_gmm_spec(2, 1, 1.0, 0);
    CHECK_THROWS_AS(sample_dataset(s, 0, 5, 0), InvalidArgument);
    CHECK_THROWS_AS(sample_dataset(s, 5, 0, 0), InvalidArgument);
}

TEST_CASE("analytic moments of two unit Gaussians on e1") {
    GmmSpec s;
    s.dim = 3;
    s.k = 1;
    s.weights = {1.0};
    s.sigma = 1.0;
    s.means_pos = {Vector::Unit(3, 0)};
    s.means_neg = {-Vector::Unit(3, 0)};
    const auto m = analytic_pair_moments(s);
    CHECK(m.mu == 2.0 * Vector::Unit(3, 0));
    Matrix expected = 2.0 * Matrix::Identity(3, 3);
    expected(0, 0) += 4.0;
    CHECK((m.sigma - expected).cwiseAbs().maxCoeff() <= 1e-15);

    // sigma must stay positive; the rank-one limit is checked at 1e-12.
    s.sigma = 1e-12;
    const auto r1 = analytic_pair_moments(s);
    CHECK((r1.sigma - r1.mu * r1.mu.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("analytic moments match empirical pair moments of large samples") {
    const auto spec = random_gmm_spec(3, 3, 1.0, 12);
    const auto m = analytic_pair_moments(spec);
    // 1000 x 1000 = 10^6 pairs; the all-pairs moments have O(1/sqrt(1000)) error.
    const auto d = sample_dataset(spec, 1000, 1000, 13);
    const auto e = batch_moments_fast(d);
    CHECK((e.mu - m.mu).cwiseAbs().maxCoeff() <= 4.0 * std::sqrt(2.0 * (1.0 + 1.0) / 1000.0));
    CHECK((e.sigma - m.sigma).cwiseAbs().maxCoeff() <= 0.4);
}

TEST_CASE("optimal ranker beats random feasible weights") {
    const auto spec = random_gmm_spec(4, 2, 2.0, 14);
    const auto m = analytic_pair_moments(spec);
    const ProblemConfig cfg{1.0, 1.0};
    const auto opt = optimal_phi_ranker(spec, cfg);
    const double best = expected_phi_risk(m, opt.weights);
    std::mt19937_64 gen(15);
    for (int t = 0; t < 1000; ++t) {
        const auto w = oracle::uniform_in_ball(gen, 4, 1.0);
        CHECK(best <= expected_phi_risk(m, RankerWeights{Eigen::Map<const Vector>(w.data(), 4)}) + 1e-12);
    }
}

TEST_CASE("symmetric spec along e1 gives an axis-aligned optimum") {
    GmmSpec s;
    s.dim = 3;
    s.k = 1;
    s.weights = {1.0};
    s.sigma = 1.0;
    s.means_pos = {Vector::Unit(3, 0)};
    s.means_neg = {-Vector::Unit(3, 0)};
    const auto w = optimal_phi_ranker(s, {1.0, 100.0}).weights.w;
    CHECK(w[0] > 0.0);
    CHECK(std::abs(w[1]) <= 1e-14);
    CHECK(std::abs(w[2]) <= 1e-14);
    CHECK(w[0] == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("shrinking W shrinks the optimum") {
    const auto spec = random_gmm_spec(3, 2, 2.0, 16);
    CHECK(optimal_phi_ranker(spec, {1.0, 1e-6}).weights.w.norm() <= 1e-6 * (1.0 + 1e-9));
}

TEST_CASE("trained BBR risk is no better than the optimum") {
    const auto spec = random_gmm_spec(5, 2, 2.0, 17);
    const auto m = analytic_pair_moments(spec);
    const ProblemConfig cfg{1.0, 1.0};
    const double opt = expected_phi_risk(m, optimal_phi_ranker(spec, cfg).weights);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto d = sample_dataset(spec, 200, 200, seed);
        const auto w = solve_erm(batch_moments_fast(d), cfg).weights;
        CHECK(expected_phi_risk(m, w) - opt >= -1e-9);
    }
}

TEST_CASE("spec file round trip") {
    const auto s = random_gmm_spec(3, 2, 2.5, 18);
    std::stringstream ss;
    write_gmm_spec(ss, s);
    const auto r = read_gmm_spec(ss);
    CHECK(r.dim == s.dim);
    CHECK(r.k == s.k);
    CHECK(r.sigma == s.sigma);
    CHECK(r.weights == s.weights);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(r.means_pos[k] == s.means_pos[k]);
        CHECK(r.means_neg[k] == s.means_neg[k]);
    }
}

TEST_CASE("broken spec files are rejected") {
    for (const char* text : {
             "format = bprank-gmm-v1\ndim = 2\nk = 1\nsigma = 1\nweights = 1\nmean_pos.0 = 0 0\n",
             "format = other\ndim = 1\nk = 1\nsigma = 1\nweights = 1\nmean_pos.0 = 0\nmean_neg.0 = 0\n",
             "format = bprank-gmm-v1\ndim = 1\nk = 1\nsigma = -1\nweights = 1\nmean_pos.0 = 0\nmean_neg.0 = 0\n",
             "format = bprank-gmm-v1\ndim = 1\nk = 2\nsigma = 1\nweights = 0.3 0.3\nmean_pos.0 = 0\nmean_neg.0 = "
             "0\nmean_pos.1 = 0\nmean_neg.1 = 0\n",
         }) {
        std::istringstream in(text);
        CHECK_THROWS(read_gmm_spec(in));
    }
}

}
