#pragma once

#include <cstdint>

#include "bprank/core.hpp"

namespace bprank {

// auc is the mean pairwise ordering statistic (1 = every positive scored
// above every negative, ties count one half). auc_risk = 1 - auc.
// phi_risk is the all-pairs mean of 1/2 (1 - w^T (x^1 - x^0))^2.
struct EvalReport {
    double auc = 0.0;
    double auc_risk = 0.0;
    double phi_risk = 0.0;
    std::uint64_t n_pairs = 0;
};

// Scores w^T x for every row.
Vector scores(const RowMatrix& x, const Vector& w);

// O(N1 N0) double loop over score comparisons.
double auc_naive(const Dataset& data, const RankerWeights& w);

// Rank-sum form with midranks for tied groups. Counts are kept in integer
// half-units, so the result is bit-identical to auc_naive.
double auc_fast(const Dataset& data, const RankerWeights& w);

// Via the moments identity 1/2 + 1/2 w^T sigma_N w - mu_N^T w with fast
// batch moments.
double phi_risk(const Dataset& data, const RankerWeights& w);

// Direct double loop over all pairs.
double phi_risk_naive(const Dataset& data, const RankerWeights& w);

// 1/2 + 1/2 w^T sigma w - mu^T w for given (usually population) moments.
double expected_phi_risk(const Matrix& sigma, const Vector& mu, const RankerWeights& w);
double expected_phi_risk(const PairMoments& moments, const RankerWeights& w);

EvalReport evaluate(const Dataset& data, const RankerWeights& w);

}  // namespace bprank
