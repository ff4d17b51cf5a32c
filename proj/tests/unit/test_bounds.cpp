#include <doctest.h>

#include <cmath>

#include "bound_formulas.hpp"
#include "bprank/bounds.hpp"

using namespace bprank;

namespace {

bool rel_eq(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

BoundInputs base() {
    BoundInputs in;
    in.dim = 5;
    in.x_star = 1.0;
    in.w_star = 1.0;
    in.rho = 0.5;
    in.n = 1e5;
    in.sigma_n_opnorm = 4.0;
    in.epsilon = 0.5;
    in.delta = 0.05;
    return in;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("C1 and C2") {
    auto k = constants_c1_c2(1.0, 1.0);
    CHECK(k.c1 == 12.0);
    CHECK(k.c2 == 5.0);
    k = constants_c1_c2(2.0, 0.5);
    CHECK(k.c1 == 24.0);
    CHECK(k.c2 == 5.0);
    k = constants_c1_c2(0.0, 1.0);
    CHECK(k.c1 == 0.0);
    CHECK(k.c2 == 0.0);
}

TEST_CASE("covering number") {
    CHECK(log_covering_number(2.0, 7) <= 7 * std::log(2.0));
    CHECK(log_covering_number(1.0, 1) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(log_covering_number(0.1, 10) == doctest::Approx(10 * std::log(21.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_covering_number(0.0, 1), InvalidArgument);
}

TEST_CASE("theorem 1 worked instance and N linearity") {
    auto in = base();
    CHECK(rel_eq(theorem1_log_tail(in), formula::theorem1(5, 1, 1, 0.5, 1e5, 0.5), 1e-12));
    const double t1 = theorem1_log_tail(in);
    in.n *= 2;
    const double t2 = theorem1_log_tail(in);
    CHECK(rel_eq(t1 - t2, 0.25 / (8.0 * 25.0) * 0.25 * 1e5, 1e-12));
}

TEST_CASE("theorem 1 skew") {
    auto in = base();
    const double mid = theorem1_log_tail(in);
    in.rho = 0.05;
    CHECK(mid <= theorem1_log_tail(in));
}

TEST_CASE("lemma 1 formula and rho symmetry") {
    auto in = base();
    CHECK(rel_eq(lemma1_log_tail(in), formula::lemma1(5, 1, 1, 0.5, 1e5, 0.5), 1e-12));
    in.rho = 0.2;
    const double a = lemma1_log_tail(in);
    in.rho = 0.8;
    CHECK(rel_eq(a, lemma1_log_tail(in), 1e-12));
}

TEST_CASE("theorem 2 worked instance") {
    BoundInputs in;
    in.dim = 10;
    in.sigma_n_opnorm = 4.0;
    in.epsilon = 0.1;
    in.delta = 0.05;
    const double expected = formula::theorem2_s(10, 1, 1, 4.0, 0.1, 0.05);
    CHECK(rel_eq(theorem2_subsample_bound(in), expected, 1e-12));
    CHECK(theorem2_min_subsample(in) == static_cast<std::uint64_t>(std::ceil(expected)));
}

TEST_CASE("theorem 2 monotonicity") {
    BoundInputs in;
    in.sigma_n_opnorm = 1.0;
    const auto s = theorem2_min_subsample(in);
    in.epsilon *= 2;
    CHECK(theorem2_min_subsample(in) <= s);
    const auto at_small_delta = theorem2_min_subsample(in);
    in.delta = 0.5;
    CHECK(theorem2_min_subsample(in) <= at_small_delta);
}

TEST_CASE("theorem 2 finite as delta approaches 1 with D = 1") {
    BoundInputs in;
    in.dim = 1;
    in.delta = std::nextafter(1.0, 0.0);
    CHECK(std::isfinite(theorem2_subsample_bound(in)));
}

TEST_CASE("theorem 3 formula, dominance over theorem 2, and p halving") {
    BoundInputs in;
    in.dim = 10;
    in.sigma_n_opnorm = 4.0;
    in.epsilon = 0.1;
    in.delta = 0.05;
    CHECK(rel_eq(theorem3_subsample_bound(in), formula::theorem3_s(10, 1, 1, 4.0, 0.1, 0.05), 1e-12));
    CHECK(theorem3_min_subsample(in) >= theorem2_min_subsample(in));
    const auto s = theorem3_min_subsample(in);
    in.delta /= 2;
    CHECK(theorem3_min_subsample(in) > s);
    in = base();
    CHECK(rel_eq(theorem3_log_tail(in), formula::theorem3(5, 1, 1, 0.5, 1e5, 0.5, 0.05), 1e-12));
}

TEST_CASE("lemma 2 matrix tail") {
    CHECK(rel_eq(std::exp(lemma2_matrix_log_tail(1000, 0.3, 1.0, 1.0, 0.7, 3)),
                 formula::lemma2_matrix(1000, 0.3, 1.0, 1.0, 0.7, 3), 1e-12));
    const double l1 = lemma2_matrix_log_tail(1000, 0.3, 1.0, 1.0, 0.7, 3);
    const double l2 = lemma2_matrix_log_tail(2000, 0.3, 1.0, 1.0, 0.7, 3);
    const double base_log = std::log(6.0);
    CHECK(rel_eq(l2 - base_log, 2.0 * (l1 - base_log), 1e-12));
    CHECK(tail_probability(lemma2_matrix_log_tail(100000000, 0.3, 1.0, 1.0, 0.7, 3)) == 0.0);
}

TEST_CASE("lemma 2 vector tail") {
    CHECK(rel_eq(std::exp(lemma2_vector_log_tail(400, 0.5, 1.0, 1.0)), formula::lemma2_vector(400, 0.5, 1.0, 1.0), 1e-12));
    // eps sqrt(S) = 2 X W: exponent 0, tail 2, clamped to 1.
    CHECK(lemma2_vector_log_tail(16, 0.5, 1.0, 1.0) == doctest::Approx(std::log(2.0)));
    CHECK(tail_probability(lemma2_vector_log_tail(16, 0.5, 1.0, 1.0)) == 1.0);
    CHECK(lemma2_vector_log_tail(1, 0.5, 1.0, 1.0) == 0.0);
    CHECK(lemma2_vector_log_tail(1600, 0.5, 1.0, 1.0) < lemma2_vector_log_tail(400, 0.5, 1.0, 1.0));
}

TEST_CASE("invalid inputs") {
    BoundInputs in;
    in.rho = 1.0;
    CHECK_THROWS_AS(theorem1_log_tail(in), InvalidArgument);
    in = BoundInputs{};
    in.delta = 0.0;
    CHECK_THROWS_AS(theorem2_min_subsample(in), InvalidArgument);
}

}
