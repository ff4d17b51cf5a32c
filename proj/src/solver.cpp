#include "bprank/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace bprank {

void SolverConfig::validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in_unit(boundary_tolerance)) throw InvalidArgument("boundary_tolerance must lie in (0, 1)");
    if (!in_unit(kkt_tolerance)) throw InvalidArgument("kkt_tolerance must lie in (0, 1)");
    if (max_bisection_iters < 10) throw InvalidArgument("max_bisection_iters must be >= 10");
}

namespace {

void check_moments(const PairMoments& m) {
    const auto d = m.mu.size();
    if (m.sigma.rows() != d || m.sigma.cols() != d) {
        throw DimensionMismatch("sigma must be D x D with D = dim(mu)");
    }
    if (!m.mu.allFinite() || !m.sigma.allFinite()) throw InvalidMoments("moments contain non-finite values");
    if (d == 0) return;
    const double scale = std::max(1.0, m.sigma.cwiseAbs().maxCoeff());
    const double asym = (m.sigma - m.sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        std::ostringstream os;
        os << "sigma is not symmetric (max |sigma - sigma^T| = " << asym << ")";
        throw InvalidMoments(os.str());
    }
}

// ||w(lambda)||^2 with w_i = c_i / (eig_i + lambda).
double secular_norm(const Vector& eig, const Vector& c, double lambda) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const double t = c(i) / (eig(i) + lambda);
        acc += t * t;
    }
    return std::sqrt(acc);
}

// d/dlambda of ||w(lambda)||.
double secular_norm_derivative(const Vector& eig, const Vector& c, double lambda, double norm) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const double den = eig(i) + lambda;
        acc += c(i) * c(i) / (den * den * den);
    }
    return -acc / norm;
}

}  // namespace

Vector project_to_ball(const Vector& v, double w_star) {
    const double n = v.norm();
    if (n <= w_star) return v;
    return v * (w_star / n);
}

double objective_value(const PairMoments& moments, const RankerWeights& w) {
    if (w.w.size() != moments.mu.size() || moments.sigma.rows() != moments.mu.size()) {
        throw DimensionMismatch("weights and moments have different dimensions");
    }
    return 0.5 * w.w.dot(moments.sigma * w.w) - moments.mu.dot(w.w);
}

SolveResult solve_erm(const PairMoments& moments, const ProblemConfig& cfg, const SolverConfig& scfg) {
    cfg.validate();
    scfg.validate();
    check_moments(moments);

    const auto d = moments.mu.size();
    const double w_star = cfg.w_star;
    SolveResult out;
    out.weights.w = Vector::Zero(d);

    auto finish = [&](SolveResult& r) {
        const Vector& w = r.weights.w;
        r.diagnostics.kkt_residual = (moments.sigma * w - moments.mu + r.diagnostics.lambda * w).norm();
        r.diagnostics.objective_value = objective_value(moments, r.weights);
        return r;
    };

    const double mu_norm = moments.mu.norm();
    if (d == 0 || mu_norm == 0.0) return finish(out);

    Eigen::SelfAdjointEigenSolver<Matrix> es(moments.sigma);
    if (es.info() != Eigen::Success) throw InvalidMoments("eigendecomposition of sigma failed");
    Vector eig = es.eigenvalues();
    const Matrix& q = es.eigenvectors();
    const double opnorm = eig.cwiseAbs().maxCoeff();
    if (eig.minCoeff() < -1e-9 * opnorm) {
        std::ostringstream os;
        os << "sigma is not positive semidefinite (min eigenvalue " << eig.minCoeff() << ")";
        throw InvalidMoments(os.str());
    }
    eig = eig.cwiseMax(0.0);
    const Vector c = q.transpose() * moments.mu;

    // Null space of sigma: eigenvalues negligible relative to the largest.
    const double null_tol = 1e-12 * eig.maxCoeff();
    double null_sq = 0.0;
    Vector interior = Vector::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (eig(i) <= null_tol) {
            null_sq += c(i) * c(i);
        } else {
            interior(i) = c(i) / eig(i);
        }
    }
    const bool mu_in_range = std::sqrt(null_sq) <= 1e-12 * mu_norm;
    if (mu_in_range && interior.norm() <= w_star) {
        out.weights.w = q * interior;
        return finish(out);
    }

    // Active constraint: ||w(lambda)|| > w_star as lambda -> 0+, and
    // ||w(hi)|| <= ||mu|| / hi = w_star.
    double lo = 0.0;
    double hi = mu_norm / w_star;
    double norm_lo = std::numeric_limits<double>::infinity();
    double lambda = hi;
    double norm_at = secular_norm(eig, c, lambda);
    double norm_hi = norm_at;
    const double target_tol = scfg.boundary_tolerance * w_star;
    int iter = 0;
    bool converged = false;
    for (; iter < scfg.max_bisection_iters; ++iter) {
        if (std::abs(norm_at - w_star) <= target_tol) {
            converged = true;
            break;
        }
        if (norm_at > w_star) {
            lo = lambda;
            norm_lo = norm_at;
        } else {
            hi = lambda;
            norm_hi = norm_at;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            converged = true;
            break;
        }

        // Newton on psi(lambda) = 1/||w|| - 1/w_star, which is close to linear.
        const double deriv = secular_norm_derivative(eig, c, lambda, norm_at);
        const double psi = 1.0 / norm_at - 1.0 / w_star;
        const double dpsi = -deriv / (norm_at * norm_at);
        double next = lambda - psi / dpsi;
        if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        lambda = next;
        norm_at = secular_norm(eig, c, lambda);
        if (!std::isfinite(norm_at)) {
            throw ConvergenceError("secular function evaluated to a non-finite value", lo, hi);
        }
        // Bracket validity: the secular function is decreasing in lambda.
        const double slack = 1e-12 * norm_at;
        if (norm_at > norm_lo + slack || norm_at < norm_hi - slack) {
            throw ConvergenceError("secular function is not monotone on the bracket", lo, hi);
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "secular equation did not converge in " << scfg.max_bisection_iters << " iterations";
        throw ConvergenceError(os.str(), lo, hi);
    }

    Vector coeffs(d);
    for (Eigen::Index i = 0; i < d; ++i) coeffs(i) = c(i) / (eig(i) + lambda);
    Vector w = q * coeffs;
    const double wn = w.norm();
    if (wn > w_star) w *= w_star / wn;

    out.weights.w = std::move(w);
    out.diagnostics.constrained_active = true;
    out.diagnostics.lambda = lambda;
    out.diagnostics.iterations = iter;
    return finish(out);
}

}  // namespace bprank
