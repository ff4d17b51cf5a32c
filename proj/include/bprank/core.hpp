#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace bprank {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// One sample per row, so a pair difference reads two contiguous rows.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Errors. Everything the library throws derives from Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dataset with an empty class (or otherwise unusable for pairwise training).
class UntrainableDataset : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Pair moments that are not symmetric or not positive semidefinite.
class InvalidMoments : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double lo, double hi)
        : Error(what), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Labelled samples stored by class. Row i of `positives` is x_i^1, row j of
// `negatives` is x_j^0. The pair feature map is fixed to x^1 - x^0.
struct Dataset {
    RowMatrix positives;
    RowMatrix negatives;
    std::size_t dim = 0;

    Dataset() = default;
    Dataset(RowMatrix pos, RowMatrix neg);

    // Throws DimensionMismatch on ragged rows.
    static Dataset from_rows(const std::vector<std::vector<double>>& pos,
                             const std::vector<std::vector<double>>& neg,
                             std::size_t dim);

    std::size_t n1() const { return static_cast<std::size_t>(positives.rows()); }
    std::size_t n0() const { return static_cast<std::size_t>(negatives.rows()); }
    std::size_t size() const { return n1() + n0(); }
    // Label skew N1 / (N0 + N1); 0 for an empty dataset.
    double skew() const;
    bool trainable() const { return n1() >= 1 && n0() >= 1; }
};

// Throws UntrainableDataset unless both classes are nonempty and the
// class matrices agree with dim.
void require_trainable(const Dataset& data);

struct ProblemConfig {
    double x_star = 1.0;  // feature l2 bound
    double w_star = 1.0;  // weight l2 bound (regularization radius)

    void validate() const;
};

struct BatchProvenance {
    std::uint64_t n1 = 0;
    std::uint64_t n0 = 0;
    bool operator==(const BatchProvenance&) const = default;
};

struct SubsampleProvenance {
    std::uint64_t s = 0;
    std::uint64_t seed = 0;
    bool operator==(const SubsampleProvenance&) const = default;
};

// Population moments computed in closed form (e.g. from a mixture spec).
struct AnalyticProvenance {
    bool operator==(const AnalyticProvenance&) const = default;
};

using Provenance = std::variant<BatchProvenance, SubsampleProvenance, AnalyticProvenance>;

// First and second moments of pair differences. sigma is stored exactly
// symmetric.
struct PairMoments {
    Vector mu;
    Matrix sigma;
    Provenance provenance;

    std::size_t dim() const { return static_cast<std::size_t>(mu.size()); }
};

struct RankerWeights {
    Vector w;

    std::size_t dim() const { return static_cast<std::size_t>(w.size()); }
    double norm() const { return w.norm(); }
};

enum class ViolationKind { DimensionMismatch, NonFinite, EmptyClass, NormExceeded };

struct Violation {
    ViolationKind kind;
    int label;  // 1 = positive class, 0 = negative class
    std::size_t index;  // row within the class (0 for class-level issues)
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::size_t count(ViolationKind kind) const;
};

ValidationReport validate_dataset(const Dataset& data, const ProblemConfig& cfg);

// Largest row norm over both classes (0 for an empty dataset).
double max_row_norm(const Dataset& data);

// Factor that scale_to_ball would apply: x_star / max norm when the max
// exceeds x_star, otherwise 1. An all-zero dataset gives 1.
double ball_scale_factor(const Dataset& data, double x_star);

Dataset scale(const Dataset& data, double factor);

// Global rescaling so that every row satisfies ||x|| <= x_star.
Dataset scale_to_ball(const Dataset& data, double x_star);

const char* to_string(ViolationKind kind);

}  // namespace bprank
