#include "bprank/eval.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "bprank/moments.hpp"
#include "bprank/solver.hpp"

namespace bprank {

namespace {

void check_dims(const Dataset& data, const RankerWeights& w) {
    require_trainable(data);
    if (w.dim() != data.dim) throw DimensionMismatch("weight dimension differs from dataset dimension");
}

double half_units_to_auc(std::uint64_t twice_correct, std::uint64_t n1, std::uint64_t n0) {
    return static_cast<double>(twice_correct) / (2.0 * static_cast<double>(n1) * static_cast<double>(n0));
}

}  // namespace

Vector scores(const RowMatrix& x, const Vector& w) {
    return x * w;
}

double auc_naive(const Dataset& data, const RankerWeights& w) {
    check_dims(data, w);
    const Vector pos = scores(data.positives, w.w);
    const Vector neg = scores(data.negatives, w.w);
    std::uint64_t twice = 0;
    for (Eigen::Index i = 0; i < pos.size(); ++i) {
        for (Eigen::Index j = 0; j < neg.size(); ++j) {
            if (pos(i) > neg(j)) {
                twice += 2;
            } else if (pos(i) == neg(j)) {
                twice += 1;
            }
        }
    }
    return half_units_to_auc(twice, data.n1(), data.n0());
}

double auc_fast(const Dataset& data, const RankerWeights& w) {
    check_dims(data, w);
    const Vector pos = scores(data.positives, w.w);
    const Vector neg = scores(data.negatives, w.w);
    const std::size_t n1 = data.n1();
    const std::size_t n0 = data.n0();
    const std::size_t n = n1 + n0;

    struct Entry {
        double score;
        bool positive;
    };
    std::vector<Entry> all;
    all.reserve(n);
    for (Eigen::Index i = 0; i < pos.size(); ++i) all.push_back({pos(i), true});
    for (Eigen::Index j = 0; j < neg.size(); ++j) all.push_back({neg(j), false});
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.score < b.score; });

    // Twice the positive rank sum: a tied block at 1-based ranks [a, b] gives
    // every member midrank (a + b) / 2.
    std::uint64_t twice_rank_sum = 0;
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && all[end].score == all[start].score) ++end;
        std::uint64_t positives_in_block = 0;
        for (std::size_t k = start; k < end; ++k) positives_in_block += all[k].positive ? 1 : 0;
        twice_rank_sum += positives_in_block * static_cast<std::uint64_t>((start + 1) + end);
        start = end;
    }
    const std::uint64_t twice_u = twice_rank_sum - static_cast<std::uint64_t>(n1) * (n1 + 1);
    return half_units_to_auc(twice_u, n1, n0);
}

double phi_risk(const Dataset& data, const RankerWeights& w) {
    check_dims(data, w);
    return expected_phi_risk(batch_moments_fast(data), w);
}

double phi_risk_naive(const Dataset& data, const RankerWeights& w) {
    check_dims(data, w);
    const Vector pos = scores(data.positives, w.w);
    const Vector neg = scores(data.negatives, w.w);
    double total = 0.0;
    for (Eigen::Index i = 0; i < pos.size(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < neg.size(); ++j) {
            const double r = 1.0 - (pos(i) - neg(j));
            row += 0.5 * r * r;
        }
        total += row;
    }
    return total / (static_cast<double>(data.n1()) * static_cast<double>(data.n0()));
}

double expected_phi_risk(const Matrix& sigma, const Vector& mu, const RankerWeights& w) {
    if (w.w.size() != mu.size() || sigma.rows() != mu.size() || sigma.cols() != mu.size()) {
        throw DimensionMismatch("weights and moments have different dimensions");
    }
    return 0.5 + 0.5 * w.w.dot(sigma * w.w) - mu.dot(w.w);
}

double expected_phi_risk(const PairMoments& moments, const RankerWeights& w) {
    return expected_phi_risk(moments.sigma, moments.mu, w);
}

EvalReport evaluate(const Dataset& data, const RankerWeights& w) {
    EvalReport r;
    r.auc = auc_fast(data, w);
    r.auc_risk = 1.0 - r.auc;
    r.phi_risk = phi_risk(data, w);
    r.n_pairs = static_cast<std::uint64_t>(data.n1()) * data.n0();
    return r;
}

}  // namespace bprank
