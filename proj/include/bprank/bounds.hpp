#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bprank/core.hpp"

namespace bprank {

// Inputs to the generalization and subsample-size bounds. `delta` doubles as
// the probability target p* of the LCBR risk bound.
struct BoundInputs {
    std::size_t dim = 1;
    double x_star = 1.0;
    double w_star = 1.0;
    double rho = 0.5;  // label skew N1 / N
    double n = 1.0;  // total sample count N
    double sigma_n_opnorm = 0.0;  // spectral norm of the empirical pair second moment
    double epsilon = 0.1;
    double delta = 0.05;

    void validate() const;
};

struct LipschitzConstants {
    double c1 = 0.0;  // 8 X*^2 W* + 4 X*
    double c2 = 0.0;  // 3 X*^2 W*^2 + 2 X* W*
};

LipschitzConstants constants_c1_c2(double x_star, double w_star);

// log of the volumetric covering bound (1 + 2 / ratio)^D, where ratio is the
// covering radius over the radius of the covered ball.
double log_covering_number(double radius_ratio, std::size_t dim);

// All tails below are natural logs of the printed right-hand sides and are
// not clamped; use tail_probability at the reporting boundary. Covering
// numbers use the ball B2(W*), i.e. ratio = radius / W*.

// Excess risk of the batch minimizer:
//   log[ 2 C(eps / 4C1) exp(-eps^2 / (8 C2^2) rho (1-rho) N) ]
double theorem1_log_tail(const BoundInputs& in);

// Uniform deviation of the empirical risk:
//   log[ 2 C(eps / 2C1) exp(-eps^2 / (2 C2^2) rho (1-rho) N) ]
double lemma1_log_tail(const BoundInputs& in);

// Excess risk of the subsampled minimizer:
//   log[ 2 C(eps / 10C1) exp(-eps^2 / (50 C2^2) rho (1-rho) N) + p* ]
double theorem3_log_tail(const BoundInputs& in);

// Subsample sizes before the ceiling:
//   max{ log(4D/delta) (||Sigma_N|| X*^2 W*^4 + eps X*^2 W*^2 / 3) / (eps^2 / 32),
//        X*^2 W*^2 / (eps^2 / 4) (sqrt(2 log(4/delta)) + 1)^2 }
double theorem2_subsample_bound(const BoundInputs& in);
//   max{ log(4D/p*) (||Sigma_N|| X*^2 W*^4 + eps X*^2 W*^2 / 15) / (eps^2 / 800),
//        X*^2 W*^2 / (eps^2 / 100) (sqrt(2 log(4/p*)) + 1)^2 }
double theorem3_subsample_bound(const BoundInputs& in);

std::uint64_t theorem2_min_subsample(const BoundInputs& in);
std::uint64_t theorem3_min_subsample(const BoundInputs& in);

// Spectral deviation of the subsampled second moment, sup_w |w^T (Sigma_S - Sigma_N) w| >= eps:
//   log[ 2D exp(-S eps^2 / (8 ||Sigma_N|| X*^2 W*^4 + (16/3) eps X*^2 W*^2)) ]
double lemma2_matrix_log_tail(std::uint64_t s, double epsilon, double x_star, double w_star,
                              double sigma_n_opnorm, std::size_t dim);

// Deviation of the subsampled first moment, sup |(w1 - w2)^T (mu_N - mu_S)| >= eps:
//   log[ 2 exp(-1/2 (eps sqrt(S) / (2 X* W*) - 1)^2) ]
// When eps sqrt(S) / (2 X* W*) < 1 the bound is vacuous and 0 (= log 1) is
// returned.
double lemma2_vector_log_tail(std::uint64_t s, double epsilon, double x_star, double w_star);

// exp(log_tail) clamped to [0, 1].
double tail_probability(double log_tail);

struct BoundReport {
    BoundInputs inputs;
    LipschitzConstants constants;
    double theorem1_log_tail = 0.0;
    double lemma1_log_tail = 0.0;
    double theorem3_log_tail = 0.0;
    std::uint64_t theorem2_min_subsample = 0;
    std::uint64_t theorem3_min_subsample = 0;
};

BoundReport evaluate_bounds(const BoundInputs& in);

// CSV with header
//   dim,x_star,w_star,rho,n,sigma_n_opnorm,epsilon,delta,c1,c2,
//   theorem1_log_tail,theorem1_tail,lemma1_log_tail,lemma1_tail,
//   theorem3_log_tail,theorem3_tail,theorem2_min_s,theorem3_min_s
// (one line), reals with 17 significant digits.
void write_bounds_csv(std::ostream& out, const std::vector<BoundReport>& rows);

}  // namespace bprank
