#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bprank/core.hpp"
#include "bprank/solver.hpp"

namespace bprank {

// Pair of K-component isotropic Gaussian mixtures sharing weights and scale.
// Class c draws component k with probability weights[k], then
// x = means_c[k] + sigma * z with z ~ N(0, I_D).
struct GmmSpec {
    std::size_t dim = 0;
    std::size_t k = 0;
    std::vector<double> weights;
    double sigma = 1.0;
    std::vector<Vector> means_pos;
    std::vector<Vector> means_neg;

    // Throws InvalidArgument on any broken invariant.
    void validate() const;
};

// Positive-class means uniform in [0,1]^D, negative-class means uniform in
// [-1,0]^D, uniform weights 1/K. Means are drawn positive component 0..K-1
// first, then negative, each coordinate in order.
GmmSpec random_gmm_spec(std::size_t dim, std::size_t k, double sigma, std::uint64_t seed);

// n1 positives then n0 negatives; per sample the component is picked by one
// uniform draw against the cumulative weights, followed by D normals.
Dataset sample_dataset(const GmmSpec& spec, std::size_t n1, std::size_t n0, std::uint64_t seed);

// Closed-form population pair moments:
//   m_c = sum_k c_k mu_k^c,  M_c = sum_k c_k (mu_k^c mu_k^c^T + sigma^2 I)
//   mu = m1 - m0,  Sigma = M1 + M0 - m1 m0^T - m0 m1^T
PairMoments analytic_pair_moments(const GmmSpec& spec);

// Population minimizer of the pairwise squared risk over the weight ball.
SolveResult optimal_phi_ranker(const GmmSpec& spec, const ProblemConfig& cfg, const SolverConfig& scfg = {});

// Text key-value format, one entry per line, '#' starts a comment:
//   format = bprank-gmm-v1
//   dim = <D>
//   k = <K>
//   sigma = <real>
//   weights = <K reals>
//   mean_pos.<k> = <D reals>     for k = 0..K-1
//   mean_neg.<k> = <D reals>
// Reals are written with 17 significant digits.
void write_gmm_spec(std::ostream& out, const GmmSpec& spec);
GmmSpec read_gmm_spec(std::istream& in);
void save_gmm_spec(const std::string& path, const GmmSpec& spec);
GmmSpec load_gmm_spec(const std::string& path);

}  // namespace bprank
