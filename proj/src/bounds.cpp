#include "bprank/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bprank/core.hpp"

namespace bprank {

void BoundInputs::validate() const {
    if (dim == 0) throw InvalidArgument("bound inputs: dim must be >= 1");
    if (!(x_star > 0.0) || !(w_star > 0.0)) throw InvalidArgument("bound inputs: x_star and w_star must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("bound inputs: rho must lie in (0, 1)");
    if (!(n > 0.0)) throw InvalidArgument("bound inputs: n must be positive");
    if (!(sigma_n_opnorm >= 0.0)) throw InvalidArgument("bound inputs: sigma_n_opnorm must be >= 0");
    if (!(epsilon > 0.0)) throw InvalidArgument("bound inputs: epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("bound inputs: delta must lie in (0, 1)");
}

LipschitzConstants constants_c1_c2(double x_star, double w_star) {
    const double x2 = x_star * x_star;
    return {8.0 * x2 * w_star + 4.0 * x_star, 3.0 * x2 * w_star * w_star + 2.0 * x_star * w_star};
}

double log_covering_number(double radius_ratio, std::size_t dim) {
    if (!(radius_ratio > 0.0)) throw InvalidArgument("covering radius ratio must be positive");
    return static_cast<double>(dim) * std::log1p(2.0 / radius_ratio);
}

namespace {

// log[ 2 C(eps / (cover_div C1)) exp(-eps^2 / (exp_div C2^2) rho (1-rho) N) ]
double mcdiarmid_union_log_tail(const BoundInputs& in, double cover_div, double exp_div) {
    in.validate();
    const auto k = constants_c1_c2(in.x_star, in.w_star);
    const double radius = in.epsilon / (cover_div * k.c1);
    const double exponent = in.epsilon * in.epsilon / (exp_div * k.c2 * k.c2) * in.rho * (1.0 - in.rho) * in.n;
    return std::log(2.0) + log_covering_number(radius / in.w_star, in.dim) - exponent;
}

double log_add_exp(double a, double b) {
    const double hi = std::max(a, b);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Common shape of the two subsample requirements.
double subsample_bound(const BoundInputs& in, double quad_div, double lin_coef, double vec_div) {
    in.validate();
    const double x2 = in.x_star * in.x_star;
    const double w2 = in.w_star * in.w_star;
    const double eps2 = in.epsilon * in.epsilon;
    const double d = static_cast<double>(in.dim);
    const double matrix_term =
        std::log(4.0 * d / in.delta) * (in.sigma_n_opnorm * x2 * w2 * w2 + lin_coef * in.epsilon * x2 * w2) /
        (eps2 / quad_div);
    const double root = std::sqrt(2.0 * std::log(4.0 / in.delta)) + 1.0;
    const double vector_term = x2 * w2 / (eps2 / vec_div) * root * root;
    return std::max(matrix_term, vector_term);
}

std::uint64_t ceil_count(double v) {
    if (!std::isfinite(v) || v >= 1.8e19) throw InvalidArgument("subsample requirement overflows 64 bits");
    return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

double theorem1_log_tail(const BoundInputs& in) {
    return mcdiarmid_union_log_tail(in, 4.0, 8.0);
}

double lemma1_log_tail(const BoundInputs& in) {
    return mcdiarmid_union_log_tail(in, 2.0, 2.0);
}

double theorem3_log_tail(const BoundInputs& in) {
    return log_add_exp(mcdiarmid_union_log_tail(in, 10.0, 50.0), std::log(in.delta));
}

double theorem2_subsample_bound(const BoundInputs& in) {
    return subsample_bound(in, 32.0, 1.0 / 3.0, 4.0);
}

double theorem3_subsample_bound(const BoundInputs& in) {
    return subsample_bound(in, 800.0, 1.0 / 15.0, 100.0);
}

std::uint64_t theorem2_min_subsample(const BoundInputs& in) {
    return ceil_count(theorem2_subsample_bound(in));
}

std::uint64_t theorem3_min_subsample(const BoundInputs& in) {
    return ceil_count(theorem3_subsample_bound(in));
}

double lemma2_matrix_log_tail(std::uint64_t s, double epsilon, double x_star, double w_star,
                              double sigma_n_opnorm, std::size_t dim) {
    if (!(epsilon > 0.0) || !(x_star > 0.0) || !(w_star > 0.0) || dim == 0 || !(sigma_n_opnorm >= 0.0)) {
        throw InvalidArgument("lemma2 matrix tail: invalid inputs");
    }
    const double x2 = x_star * x_star;
    const double w2 = w_star * w_star;
    const double denom = 8.0 * sigma_n_opnorm * x2 * w2 * w2 + (16.0 / 3.0) * epsilon * x2 * w2;
    return std::log(2.0 * static_cast<double>(dim)) - static_cast<double>(s) * epsilon * epsilon / denom;
}

double lemma2_vector_log_tail(std::uint64_t s, double epsilon, double x_star, double w_star) {
    if (!(epsilon > 0.0) || !(x_star > 0.0) || !(w_star > 0.0)) {
        throw InvalidArgument("lemma2 vector tail: invalid inputs");
    }
    const double arg = epsilon * std::sqrt(static_cast<double>(s)) / (2.0 * x_star * w_star);
    if (arg < 1.0) return 0.0;
    const double t = arg - 1.0;
    return std::log(2.0) - 0.5 * t * t;
}

double tail_probability(double log_tail) {
    if (std::isnan(log_tail)) return 1.0;
    return std::exp(std::min(0.0, log_tail));
}

BoundReport evaluate_bounds(const BoundInputs& in) {
    in.validate();
    BoundReport r;
    r.inputs = in;
    r.constants = constants_c1_c2(in.x_star, in.w_star);
    r.theorem1_log_tail = theorem1_log_tail(in);
    r.lemma1_log_tail = lemma1_log_tail(in);
    r.theorem3_log_tail = theorem3_log_tail(in);
    r.theorem2_min_subsample = theorem2_min_subsample(in);
    r.theorem3_min_subsample = theorem3_min_subsample(in);
    return r;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundReport>& rows) {
    const auto old_prec = out.precision(17);
    out << "dim,x_star,w_star,rho,n,sigma_n_opnorm,epsilon,delta,c1,c2,"
           "theorem1_log_tail,theorem1_tail,lemma1_log_tail,lemma1_tail,"
           "theorem3_log_tail,theorem3_tail,theorem2_min_s,theorem3_min_s\n";
    for (const auto& r : rows) {
        const auto& in = r.inputs;
        out << in.dim << ',' << in.x_star << ',' << in.w_star << ',' << in.rho << ',' << in.n << ','
            << in.sigma_n_opnorm << ',' << in.epsilon << ',' << in.delta << ',' << r.constants.c1 << ','
            << r.constants.c2 << ',' << r.theorem1_log_tail << ',' << tail_probability(r.theorem1_log_tail) << ','
            << r.lemma1_log_tail << ',' << tail_probability(r.lemma1_log_tail) << ',' << r.theorem3_log_tail << ','
            << tail_probability(r.theorem3_log_tail) << ',' << r.theorem2_min_subsample << ','
            << r.theorem3_min_subsample << '\n';
    }
    out.precision(old_prec);
}

}  // namespace bprank
