#pragma once

#include <cstdint>
#include <vector>

#include "bprank/core.hpp"

namespace bprank {

// Fixed-step projected SGD on the pairwise squared loss. Labelled
// "pairwise-sgd" in experiment output; it is a generic stand-in for the
// stochastic-gradient family, not a reimplementation of any named method.
struct SgdConfig {
    double step_size = 0.01;
    std::uint64_t budget = 1000;  // number of pair updates
    std::uint64_t seed = 0;
    double w_star = 1.0;

    void validate() const;
};

// Starting from w = 0, repeats `budget` times: draw (i, j) uniformly with
// replacement (positive index first, Rng::index), d = x_i^1 - x_j^0,
// w <- project(w - step (w^T d - 1) d).
RankerWeights train_pairwise_sgd(const Dataset& data, const SgdConfig& cfg);

// Step sizes tried by tune_pairwise_sgd.
const std::vector<double>& default_step_grid();

struct SgdTuning {
    double step_size = 0.0;
    RankerWeights weights;
    double train_phi_risk = 0.0;
};

// Runs every step size in `grid` with the same pair sequence and keeps the
// one with the lowest training phi-risk (ties: the smaller step).
SgdTuning tune_pairwise_sgd(const Dataset& data, SgdConfig cfg, const std::vector<double>& grid = default_step_grid());

}  // namespace bprank
