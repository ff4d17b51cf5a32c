#include "bprank/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

#include "bprank/rng.hpp"

namespace bprank {

namespace {

bool parse_double(std::string_view tok, double& out) {
    if (!tok.empty() && tok.front() == '+') {
        tok.remove_prefix(1);
        if (!tok.empty() && tok.front() == '-') return false;
    }
    if (tok.empty()) return false;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_index(std::string_view tok, std::size_t& out) {
    if (tok.empty()) return false;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc() && ptr == end;
}

struct SparseRow {
    std::vector<std::pair<std::size_t, double>> entries;
};

std::string line_msg(std::size_t line, const std::string& what) {
    return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim_hint) {
    std::vector<SparseRow> pos, neg;
    std::size_t max_index = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view rest(line);
        auto next_token = [&rest]() -> std::string_view {
            const auto b = rest.find_first_not_of(" \t\r\n");
            if (b == std::string_view::npos) {
                rest = {};
                return {};
            }
            rest.remove_prefix(b);
            const auto e = rest.find_first_of(" \t\r\n");
            const auto tok = rest.substr(0, e);
            rest.remove_prefix(e == std::string_view::npos ? rest.size() : e);
            return tok;
        };
        const auto label_tok = next_token();
        if (label_tok.empty()) continue;

        double label = 0.0;
        if (!parse_double(label_tok, label)) {
            throw ParseError(line_msg(lineno, "non-numeric label '" + std::string(label_tok) + "'"), lineno);
        }
        bool positive = false;
        if (label == 1.0) {
            positive = true;
        } else if (label == -1.0 || label == 0.0) {
            positive = false;
        } else {
            throw LabelError(line_msg(lineno, "label '" + std::string(label_tok) + "' is not one of -1, 0, +1, 1"),
                             lineno);
        }

        SparseRow row;
        std::size_t last = 0;
        for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos) {
                throw ParseError(line_msg(lineno, "expected index:value, got '" + std::string(tok) + "'"), lineno);
            }
            std::size_t idx = 0;
            double value = 0.0;
            if (!parse_index(tok.substr(0, colon), idx) || idx == 0) {
                throw ParseError(line_msg(lineno, "bad feature index in '" + std::string(tok) + "'"), lineno);
            }
            if (!parse_double(tok.substr(colon + 1), value) || !std::isfinite(value)) {
                throw ParseError(line_msg(lineno, "bad feature value in '" + std::string(tok) + "'"), lineno);
            }
            if (idx <= last) {
                throw ParseError(line_msg(lineno, "feature indices must be strictly increasing"), lineno);
            }
            last = idx;
            row.entries.emplace_back(idx, value);
        }
        max_index = std::max(max_index, last);
        (positive ? pos : neg).push_back(std::move(row));
    }
    if (in.bad()) throw Error("read error while parsing LIBSVM input");

    const std::size_t dim = std::max(max_index, dim_hint.value_or(0));
    auto densify = [dim](const std::vector<SparseRow>& rows) {
        RowMatrix m = RowMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (const auto& [idx, v] : rows[i].entries) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(idx - 1)) = v;
            }
        }
        return m;
    };
    Dataset out;
    out.positives = densify(pos);
    out.negatives = densify(neg);
    out.dim = dim;
    return out;
}

Dataset load_libsvm(const std::string& path, std::optional<std::size_t> dim_hint) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_libsvm(in, dim_hint);
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_libsvm(std::ostream& out, const Dataset& data) {
    auto emit = [&out](const RowMatrix& m, const char* label) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            out << label;
            for (Eigen::Index a = 0; a < m.cols(); ++a) {
                if (m(i, a) != 0.0) out << ' ' << (a + 1) << ':' << format_real(m(i, a));
            }
            out << '\n';
        }
    };
    emit(data.positives, "+1");
    emit(data.negatives, "-1");
}

std::optional<std::string> dense_dimension_warning(std::size_t dim) {
    if (dim <= 5000) return std::nullopt;
    return "dimension " + std::to_string(dim) + " exceeds 5000; dense D x D moments need " +
           std::to_string(dim * dim * 8 / (1024 * 1024)) + " MiB";
}

void ResultRow::add_extra(const std::string& key, double value) {
    extra.emplace_back(key, format_real(value));
}

void ResultRow::add_extra(const std::string& key, const std::string& value) {
    extra.emplace_back(key, value);
}

std::optional<std::string> ResultRow::find_extra(const std::string& key) const {
    for (const auto& [k, v] : extra) {
        if (k == key) return v;
    }
    return std::nullopt;
}

const char* const kResultCsvHeader =
    "experiment_id,algorithm,dataset,n1,n0,s,seed,phi_risk,auc,wall_time_seconds,extra";

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string join_extra(const std::vector<std::pair<std::string, std::string>>& extra) {
    std::string out;
    for (const auto& [k, v] : extra) {
        if (k.find_first_of(";=") != std::string::npos || v.find(';') != std::string::npos) {
            throw InvalidArgument("extra key/value may not contain ';' (or '=' in keys): " + k);
        }
        if (!out.empty()) out += ';';
        out += k + '=' + v;
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> split_extra(const std::string& s, std::size_t line) {
    std::vector<std::pair<std::string, std::string>> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(';', start);
        if (end == std::string::npos) end = s.size();
        const auto item = s.substr(start, end - start);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("extra entry without '=': " + item, line);
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        start = end + 1;
    }
    return out;
}

// Splits one CSV record; may consume further lines for quoted newlines.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    char c = 0;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            ++line;
            fields.push_back(std::move(field));
            return true;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field", line);
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

std::uint64_t to_u64(const std::string& s, std::size_t line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad integer field '" + s + "'", line);
    return v;
}

double to_real(const std::string& s, std::size_t line) {
    double v = 0.0;
    if (!parse_double(s, v)) throw ParseError("bad real field '" + s + "'", line);
    return v;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kResultCsvHeader << '\n';
    for (const auto& r : rows) {
        out << csv_quote(r.experiment_id) << ',' << csv_quote(r.algorithm) << ',' << csv_quote(r.dataset) << ','
            << r.n1 << ',' << r.n0 << ',' << r.s << ',' << r.seed << ',' << format_real(r.phi_risk) << ','
            << format_real(r.auc) << ',' << format_real(r.wall_time_seconds) << ',' << csv_quote(join_extra(r.extra))
            << '\n';
    }
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_results_csv(out, rows);
    out.flush();
    if (!out) throw Error("failed writing " + path);
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
    std::vector<std::string> f;
    std::size_t line = 1;
    if (!read_record(in, f, line)) throw ParseError("empty CSV input", line);
    std::string header;
    for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
    if (header != kResultCsvHeader) throw ParseError("unexpected CSV header: " + header, 1);
    std::vector<ResultRow> rows;
    while (true) {
        const std::size_t row_line = line;
        if (!read_record(in, f, line)) break;
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != 11) throw ParseError("expected 11 CSV fields, got " + std::to_string(f.size()), row_line);
        ResultRow r;
        r.experiment_id = f[0];
        r.algorithm = f[1];
        r.dataset = f[2];
        r.n1 = to_u64(f[3], row_line);
        r.n0 = to_u64(f[4], row_line);
        r.s = to_u64(f[5], row_line);
        r.seed = to_u64(f[6], row_line);
        r.phi_risk = to_real(f[7], row_line);
        r.auc = to_real(f[8], row_line);
        r.wall_time_seconds = to_real(f[9], row_line);
        r.extra = split_extra(f[10], row_line);
        rows.push_back(std::move(r));
    }
    return rows;
}

SplitResult subsample_ratio_split(const Dataset& data, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidArgument("sample ratio must lie in (0, 1]");
    const std::size_t n = data.size();
    // Tolerance keeps e.g. 0.7 * 100 = 70.000000000000014 at 70.
    const auto take = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9)));

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.index(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(take);
    std::sort(idx.begin(), idx.end());

    const std::size_t n1 = data.n1();
    const auto split_at = std::lower_bound(idx.begin(), idx.end(), n1);
    const auto take1 = static_cast<Eigen::Index>(split_at - idx.begin());
    const auto take0 = static_cast<Eigen::Index>(idx.end() - split_at);
    const auto d = static_cast<Eigen::Index>(data.dim);
    SplitResult out;
    out.data.dim = data.dim;
    out.data.positives.resize(take1, d);
    out.data.negatives.resize(take0, d);
    Eigen::Index p = 0, q = 0;
    for (auto k : idx) {
        if (k < n1) {
            out.data.positives.row(p++) = data.positives.row(static_cast<Eigen::Index>(k));
        } else {
            out.data.negatives.row(q++) = data.negatives.row(static_cast<Eigen::Index>(k - n1));
        }
    }
    if (take1 == 0 || take0 == 0) {
        out.warning = "sample-ratio split left class " + std::string(take1 == 0 ? "1" : "0") +
                      " empty; the dataset is untrainable";
    }
    return out;
}

}  // namespace bprank
