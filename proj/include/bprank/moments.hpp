#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bprank/core.hpp"

namespace bprank {

struct SubsampleConfig {
    std::uint64_t s = 1;  // number of pairs drawn
    std::uint64_t seed = 0;
};

// All-pairs accumulation, one pair at a time. Theta(N1 N0 D^2).
PairMoments batch_moments_naive(const Dataset& data);

// Same value as batch_moments_naive from class-wise moments:
//   mu    = m1 - m0
//   sigma = M1 + M0 - m1 m0^T - m0 m1^T
// where m_c, M_c are the class mean and mean outer product. Theta((N1+N0) D^2).
PairMoments batch_moments_fast(const Dataset& data);

// S pairs (i_s, j_s) drawn uniformly with replacement from the N1 x N0 grid.
// For each s the positive index is drawn first, then the negative index,
// both with Rng::index. The pair sequence depends only on (seed, S, N1, N0).
PairMoments subsample_moments(const Dataset& data, const SubsampleConfig& cfg);

// The (i_s, j_s) sequence subsample_moments would use.
std::vector<std::pair<std::uint64_t, std::uint64_t>> draw_pair_indices(std::uint64_t n1, std::uint64_t n0,
                                                                        const SubsampleConfig& cfg);

// Largest eigenvalue of sigma (spectral norm for a PSD matrix).
double sigma_opnorm(const PairMoments& m);

}  // namespace bprank
