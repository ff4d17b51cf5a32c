#pragma once

#include "bprank/core.hpp"

namespace bprank {

struct SolverConfig {
    double boundary_tolerance = 1e-12;  // relative, on ||w|| = w_star when active
    int max_bisection_iters = 200;
    double kkt_tolerance = 1e-8;

    void validate() const;
};

struct SolveDiagnostics {
    bool constrained_active = false;
    double lambda = 0.0;  // multiplier of the ball constraint, 0 when interior
    double kkt_residual = 0.0;  // ||sigma w - mu + lambda w||
    double objective_value = 0.0;
    int iterations = 0;  // root-finding iterations (0 when interior)
};

struct SolveResult {
    RankerWeights weights;
    SolveDiagnostics diagnostics;
};

// Minimizes q(w) = 1/2 w^T sigma w - mu^T w over ||w|| <= w_star.
//
// sigma = Q diag(lambda_i) Q^T is diagonalized once. With c = Q^T mu:
//  * mu = 0 gives w = 0.
//  * If c has no component in the null space of sigma and the minimum-norm
//    minimizer sum c_i / lambda_i q_i lies in the ball, it is returned with
//    multiplier 0.
//  * Otherwise the constraint is active and the multiplier solves the
//    secular equation ||(sigma + lambda I)^{-1} mu|| = w_star on
//    (0, ||mu|| / w_star]. The left side is strictly decreasing, so the root
//    is unique; it is found by Newton on 1/||w(lambda)|| safeguarded by
//    bisection.
//
// Throws InvalidMoments for non-symmetric, non-finite or indefinite sigma and
// ConvergenceError (with the last bracket) when the root is not located
// within max_bisection_iters.
SolveResult solve_erm(const PairMoments& moments, const ProblemConfig& cfg, const SolverConfig& scfg = {});

// 1/2 w^T sigma w - mu^T w, without the constant 1/2 of the reported risk.
double objective_value(const PairMoments& moments, const RankerWeights& w);

// Euclidean projection onto the ball of radius w_star.
Vector project_to_ball(const Vector& v, double w_star);

}  // namespace bprank
