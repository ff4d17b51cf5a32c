#include "bprank/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bprank {

Dataset::Dataset(RowMatrix pos, RowMatrix neg)
    : positives(std::move(pos)), negatives(std::move(neg)) {
    if (positives.rows() > 0 && negatives.rows() > 0 && positives.cols() != negatives.cols()) {
        throw DimensionMismatch("positive and negative samples have different dimensions");
    }
    dim = static_cast<std::size_t>(positives.rows() > 0 ? positives.cols() : negatives.cols());
    if (positives.rows() == 0) positives.resize(0, static_cast<Eigen::Index>(dim));
    if (negatives.rows() == 0) negatives.resize(0, static_cast<Eigen::Index>(dim));
}

namespace {

RowMatrix stack_rows(const std::vector<std::vector<double>>& rows, std::size_t dim, const char* which) {
    RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            std::ostringstream os;
            os << which << " row " << i << " has " << rows[i].size() << " features, expected " << dim;
            throw DimensionMismatch(os.str());
        }
        for (std::size_t d = 0; d < dim; ++d) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = rows[i][d];
    }
    return m;
}

}  // namespace

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& pos,
                           const std::vector<std::vector<double>>& neg, std::size_t dim) {
    Dataset out;
    out.positives = stack_rows(pos, dim, "positive");
    out.negatives = stack_rows(neg, dim, "negative");
    out.dim = dim;
    return out;
}

double Dataset::skew() const {
    const auto n = size();
    return n == 0 ? 0.0 : static_cast<double>(n1()) / static_cast<double>(n);
}

void require_trainable(const Dataset& data) {
    if (data.n1() == 0 || data.n0() == 0) {
        std::ostringstream os;
        os << "untrainable dataset: N1=" << data.n1() << ", N0=" << data.n0()
           << " (both classes must be nonempty)";
        throw UntrainableDataset(os.str());
    }
    if (static_cast<std::size_t>(data.positives.cols()) != data.dim ||
        static_cast<std::size_t>(data.negatives.cols()) != data.dim) {
        throw DimensionMismatch("class matrices disagree with dataset dimension");
    }
}

void ProblemConfig::validate() const {
    if (!(x_star > 0.0) || !std::isfinite(x_star)) throw InvalidArgument("x_star must be positive and finite");
    if (!(w_star > 0.0) || !std::isfinite(w_star)) throw InvalidArgument("w_star must be positive and finite");
}

std::size_t ValidationReport::count(ViolationKind kind) const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [kind](const Violation& v) { return v.kind == kind; }));
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::DimensionMismatch: return "dimension-mismatch";
        case ViolationKind::NonFinite: return "non-finite";
        case ViolationKind::EmptyClass: return "empty-class";
        case ViolationKind::NormExceeded: return "norm-exceeded";
    }
    return "unknown";
}

namespace {

void check_class(const RowMatrix& m, int label, const Dataset& data, const ProblemConfig& cfg,
                 ValidationReport& report) {
    if (m.rows() == 0) {
        report.violations.push_back({ViolationKind::EmptyClass, label, 0, "class has no samples"});
        return;
    }
    if (static_cast<std::size_t>(m.cols()) != data.dim) {
        std::ostringstream os;
        os << "class has " << m.cols() << " features, dataset dim is " << data.dim;
        report.violations.push_back({ViolationKind::DimensionMismatch, label, 0, os.str()});
        return;
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        if (!row.allFinite()) {
            report.violations.push_back({ViolationKind::NonFinite, label, static_cast<std::size_t>(i),
                                         "row contains NaN or infinite values"});
            continue;
        }
        const double norm = row.norm();
        if (norm > cfg.x_star) {
            std::ostringstream os;
            os << "norm " << norm << " exceeds x_star " << cfg.x_star;
            report.violations.push_back({ViolationKind::NormExceeded, label, static_cast<std::size_t>(i), os.str()});
        }
    }
}

}  // namespace

ValidationReport validate_dataset(const Dataset& data, const ProblemConfig& cfg) {
    ValidationReport report;
    check_class(data.positives, 1, data, cfg, report);
    check_class(data.negatives, 0, data, cfg, report);
    return report;
}

double max_row_norm(const Dataset& data) {
    double best = 0.0;
    if (data.positives.rows() > 0) best = std::max(best, data.positives.rowwise().norm().maxCoeff());
    if (data.negatives.rows() > 0) best = std::max(best, data.negatives.rowwise().norm().maxCoeff());
    return best;
}

double ball_scale_factor(const Dataset& data, double x_star) {
    if (!(x_star > 0.0)) throw InvalidArgument("x_star must be positive");
    const double max_norm = max_row_norm(data);
    if (!std::isfinite(max_norm)) throw InvalidArgument("dataset contains non-finite values");
    if (max_norm <= x_star) return 1.0;
    // Rounding can leave the scaled max norm one ulp above x_star.
    double factor = x_star / max_norm;
    while (max_row_norm(scale(data, factor)) > x_star) factor = std::nextafter(factor, 0.0);
    return factor;
}

Dataset scale(const Dataset& data, double factor) {
    Dataset out = data;
    if (factor != 1.0) {
        out.positives *= factor;
        out.negatives *= factor;
    }
    return out;
}

Dataset scale_to_ball(const Dataset& data, double x_star) {
    return scale(data, ball_scale_factor(data, x_star));
}

}  // namespace bprank
