#include "bprank/moments.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bprank/rng.hpp"

namespace bprank {

namespace {

// Running sums of pair differences. mu uses Neumaier summation, sigma plain
// summation into the lower triangle.
class PairAccumulator {
public:
    explicit PairAccumulator(std::size_t dim)
        : dim_(dim), diff_(dim, 0.0), sum_(dim, 0.0), comp_(dim, 0.0), outer_(dim * dim, 0.0) {}

    void add(const double* pos, const double* neg) {
        for (std::size_t a = 0; a < dim_; ++a) {
            const double d = pos[a] - neg[a];
            diff_[a] = d;
            const double t = sum_[a] + d;
            if (std::abs(sum_[a]) >= std::abs(d)) {
                comp_[a] += (sum_[a] - t) + d;
            } else {
                comp_[a] += (d - t) + sum_[a];
            }
            sum_[a] = t;
        }
        for (std::size_t a = 0; a < dim_; ++a) {
            const double da = diff_[a];
            double* row = outer_.data() + a * dim_;
            for (std::size_t b = 0; b <= a; ++b) row[b] += da * diff_[b];
        }
    }

    PairMoments finish(double count, Provenance provenance) const {
        const auto n = static_cast<Eigen::Index>(dim_);
        PairMoments m{Vector(n), Matrix(n, n), provenance};
        for (std::size_t a = 0; a < dim_; ++a) m.mu(static_cast<Eigen::Index>(a)) = (sum_[a] + comp_[a]) / count;
        for (std::size_t a = 0; a < dim_; ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                const double v = outer_[a * dim_ + b] / count;
                m.sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
                m.sigma(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
            }
        }
        return m;
    }

private:
    std::size_t dim_;
    std::vector<double> diff_;
    std::vector<double> sum_;
    std::vector<double> comp_;
    std::vector<double> outer_;
};

}  // namespace

PairMoments batch_moments_naive(const Dataset& data) {
    require_trainable(data);
    PairAccumulator acc(data.dim);
    const auto n1 = data.positives.rows();
    const auto n0 = data.negatives.rows();
    for (Eigen::Index i = 0; i < n1; ++i) {
        const double* pos = data.positives.row(i).data();
        for (Eigen::Index j = 0; j < n0; ++j) acc.add(pos, data.negatives.row(j).data());
    }
    const double pairs = static_cast<double>(n1) * static_cast<double>(n0);
    return acc.finish(pairs, BatchProvenance{static_cast<std::uint64_t>(n1), static_cast<std::uint64_t>(n0)});
}

PairMoments batch_moments_fast(const Dataset& data) {
    require_trainable(data);
    const double n1 = static_cast<double>(data.n1());
    const double n0 = static_cast<double>(data.n0());

    const Vector m1 = data.positives.colwise().sum().transpose() / n1;
    const Vector m0 = data.negatives.colwise().sum().transpose() / n0;
    const auto d = static_cast<Eigen::Index>(data.dim);
    Matrix second1 = Matrix::Zero(d, d);
    Matrix second0 = Matrix::Zero(d, d);
    second1.selfadjointView<Eigen::Lower>().rankUpdate(data.positives.transpose(), 1.0 / n1);
    second0.selfadjointView<Eigen::Lower>().rankUpdate(data.negatives.transpose(), 1.0 / n0);

    Matrix sigma = second1 + second0 - m1 * m0.transpose() - m0 * m1.transpose();
    // Only the lower triangles of second1/second0 are filled; mirror it.
    sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose().triangularView<Eigen::StrictlyUpper>();
    return PairMoments{m1 - m0, std::move(sigma),
                       BatchProvenance{static_cast<std::uint64_t>(data.n1()), static_cast<std::uint64_t>(data.n0())}};
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> draw_pair_indices(std::uint64_t n1, std::uint64_t n0,
                                                                        const SubsampleConfig& cfg) {
    if (cfg.s == 0) throw InvalidArgument("subsample size S must be >= 1");
    Rng rng(cfg.seed);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.reserve(cfg.s);
    for (std::uint64_t s = 0; s < cfg.s; ++s) {
        const auto i = rng.index(n1);
        const auto j = rng.index(n0);
        out.emplace_back(i, j);
    }
    return out;
}

PairMoments subsample_moments(const Dataset& data, const SubsampleConfig& cfg) {
    require_trainable(data);
    if (cfg.s == 0) throw InvalidArgument("subsample size S must be >= 1");
    Rng rng(cfg.seed);
    const auto n1 = static_cast<std::uint64_t>(data.n1());
    const auto n0 = static_cast<std::uint64_t>(data.n0());
    PairAccumulator acc(data.dim);
    for (std::uint64_t s = 0; s < cfg.s; ++s) {
        const auto i = static_cast<Eigen::Index>(rng.index(n1));
        const auto j = static_cast<Eigen::Index>(rng.index(n0));
        acc.add(data.positives.row(i).data(), data.negatives.row(j).data());
    }
    return acc.finish(static_cast<double>(cfg.s), SubsampleProvenance{cfg.s, cfg.seed});
}

double sigma_opnorm(const PairMoments& m) {
    if (m.sigma.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.sigma, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

}  // namespace bprank
