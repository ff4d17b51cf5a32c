#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bprank/core.hpp"

namespace bprank {

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line) : Error(what), line(line) {}
    std::size_t line;  // 1-based
};

// A label outside {-1, 0, +1, 1}.
class LabelError : public ParseError {
public:
    using ParseError::ParseError;
};

// LIBSVM text: one sample per line, `<label> <index>:<value> ...` with
// 1-based, strictly increasing indices. Labels +1/1 are positives, -1/0
// negatives. Missing indices are zero. Blank lines are skipped. The result
// is dense with dim = max(largest index, dim_hint).
Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim_hint = std::nullopt);
Dataset load_libsvm(const std::string& path, std::optional<std::size_t> dim_hint = std::nullopt);

// Positives (label +1) then negatives (label -1); zero features omitted,
// values with 17 significant digits.
void write_libsvm(std::ostream& out, const Dataset& data);

// Dense storage is D^2-friendly but not for huge D; returns a message above
// 5000 features.
std::optional<std::string> dense_dimension_warning(std::size_t dim);

// One experiment outcome. CSV columns, in order:
//   experiment_id,algorithm,dataset,n1,n0,s,seed,phi_risk,auc,wall_time_seconds,extra
// `extra` is `key=value` pairs joined by ';'. Reals use 17 significant digits.
struct ResultRow {
    std::string experiment_id;
    std::string algorithm;
    std::string dataset;
    std::uint64_t n1 = 0;
    std::uint64_t n0 = 0;
    std::uint64_t s = 0;  // 0 for batch training
    std::uint64_t seed = 0;
    double phi_risk = 0.0;
    double auc = 0.0;
    double wall_time_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> extra;

    // Convenience for numeric extras (17 significant digits).
    void add_extra(const std::string& key, double value);
    void add_extra(const std::string& key, const std::string& value);
    std::optional<std::string> find_extra(const std::string& key) const;

    bool operator==(const ResultRow&) const = default;
};

extern const char* const kResultCsvHeader;

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& in);

// RFC-4180 quoting of a single field.
std::string csv_quote(const std::string& field);
std::string format_real(double v);

struct SplitResult {
    Dataset data;
    std::optional<std::string> warning;  // set when a class came out empty
};

// Uniform selection without replacement of ceil(ratio * N) samples over the
// pooled dataset (labels kept, class counts not stratified). Selected
// samples keep their original relative order.
SplitResult subsample_ratio_split(const Dataset& data, double ratio, std::uint64_t seed);

}  // namespace bprank
