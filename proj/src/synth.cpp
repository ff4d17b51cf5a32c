#include "bprank/synth.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "bprank/rng.hpp"

namespace bprank {

void GmmSpec::validate() const {
    if (k == 0) throw InvalidArgument("mixture needs at least one component");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive and finite");
    if (weights.size() != k || means_pos.size() != k || means_neg.size() != k) {
        throw InvalidArgument("weights and means must have k entries");
    }
    double total = 0.0;
    for (double c : weights) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("mixture weights must be nonnegative");
        total += c;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("mixture weights must sum to 1");
    for (std::size_t i = 0; i < k; ++i) {
        if (static_cast<std::size_t>(means_pos[i].size()) != dim || static_cast<std::size_t>(means_neg[i].size()) != dim) {
            throw InvalidArgument("mixture mean has the wrong dimension");
        }
        if (!means_pos[i].allFinite() || !means_neg[i].allFinite()) throw InvalidArgument("mixture mean is not finite");
    }
}

GmmSpec random_gmm_spec(std::size_t dim, std::size_t k, double sigma, std::uint64_t seed) {
    if (k == 0) throw InvalidArgument("mixture needs at least one component");
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    Rng rng(seed);
    GmmSpec spec;
    spec.dim = dim;
    spec.k = k;
    spec.sigma = sigma;
    spec.weights.assign(k, 1.0 / static_cast<double>(k));
    const auto d = static_cast<Eigen::Index>(dim);
    for (std::size_t c = 0; c < k; ++c) {
        Vector m(d);
        for (Eigen::Index a = 0; a < d; ++a) m(a) = rng.uniform(0.0, 1.0);
        spec.means_pos.push_back(std::move(m));
    }
    for (std::size_t c = 0; c < k; ++c) {
        Vector m(d);
        for (Eigen::Index a = 0; a < d; ++a) m(a) = rng.uniform(-1.0, 0.0);
        spec.means_neg.push_back(std::move(m));
    }
    return spec;
}

namespace {

std::size_t pick_component(const std::vector<double>& weights, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

RowMatrix draw_class(const GmmSpec& spec, const std::vector<Vector>& means, std::size_t n, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(spec.dim);
    RowMatrix x(static_cast<Eigen::Index>(n), d);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        const auto& mean = means[pick_component(spec.weights, rng.uniform())];
        for (Eigen::Index a = 0; a < d; ++a) x(i, a) = mean(a) + spec.sigma * rng.normal();
    }
    return x;
}

}  // namespace

Dataset sample_dataset(const GmmSpec& spec, std::size_t n1, std::size_t n0, std::uint64_t seed) {
    spec.validate();
    if (n1 == 0 || n0 == 0) throw InvalidArgument("sample_dataset needs n1 >= 1 and n0 >= 1");
    Rng rng(seed);
    RowMatrix pos = draw_class(spec, spec.means_pos, n1, rng);
    RowMatrix neg = draw_class(spec, spec.means_neg, n0, rng);
    Dataset out;
    out.positives = std::move(pos);
    out.negatives = std::move(neg);
    out.dim = spec.dim;
    return out;
}

PairMoments analytic_pair_moments(const GmmSpec& spec) {
    spec.validate();
    const auto d = static_cast<Eigen::Index>(spec.dim);
    Vector m1 = Vector::Zero(d), m0 = Vector::Zero(d);
    Matrix second1 = Matrix::Zero(d, d), second0 = Matrix::Zero(d, d);
    const double var = spec.sigma * spec.sigma;
    for (std::size_t k = 0; k < spec.k; ++k) {
        const double c = spec.weights[k];
        m1 += c * spec.means_pos[k];
        m0 += c * spec.means_neg[k];
        second1 += c * (spec.means_pos[k] * spec.means_pos[k].transpose());
        second0 += c * (spec.means_neg[k] * spec.means_neg[k].transpose());
    }
    second1.diagonal().array() += var;
    second0.diagonal().array() += var;
    Matrix sigma = second1 + second0 - m1 * m0.transpose() - m0 * m1.transpose();
    sigma = 0.5 * (sigma + sigma.transpose()).eval();
    return PairMoments{m1 - m0, std::move(sigma), AnalyticProvenance{}};
}

SolveResult optimal_phi_ranker(const GmmSpec& spec, const ProblemConfig& cfg, const SolverConfig& scfg) {
    return solve_erm(analytic_pair_moments(spec), cfg, scfg);
}

namespace {

void write_reals(std::ostream& out, const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << v[i];
}

std::vector<double> parse_reals(const std::string& text, const std::string& key) {
    std::istringstream is(text);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw InvalidArgument("gmm spec: bad number '" + tok + "' for key " + key);
        out.push_back(v);
    }
    return out;
}

}  // namespace

void write_gmm_spec(std::ostream& out, const GmmSpec& spec) {
    spec.validate();
    const auto old_prec = out.precision(17);
    out << "format = bprank-gmm-v1\n";
    out << "dim = " << spec.dim << "\n";
    out << "k = " << spec.k << "\n";
    out << "sigma = " << spec.sigma << "\n";
    out << "weights = ";
    write_reals(out, spec.weights.data(), spec.weights.size());
    out << "\n";
    for (std::size_t k = 0; k < spec.k; ++k) {
        out << "mean_pos." << k << " = ";
        write_reals(out, spec.means_pos[k].data(), spec.dim);
        out << "\n";
    }
    for (std::size_t k = 0; k < spec.k; ++k) {
        out << "mean_neg." << k << " = ";
        write_reals(out, spec.means_neg[k].data(), spec.dim);
        out << "\n";
    }
    out.precision(old_prec);
}

GmmSpec read_gmm_spec(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("gmm spec line " + std::to_string(lineno) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
            throw InvalidArgument("gmm spec: duplicate key " + key);
        }
    }
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw InvalidArgument("gmm spec: missing key " + key);
        return it->second;
    };
    if (get("format") != "bprank-gmm-v1") throw InvalidArgument("gmm spec: unsupported format " + get("format"));
    auto get_count = [&](const std::string& key) {
        const auto v = parse_reals(get(key), key);
        if (v.size() != 1 || v[0] < 0 || v[0] != std::floor(v[0])) throw InvalidArgument("gmm spec: bad " + key);
        return static_cast<std::size_t>(v[0]);
    };
    GmmSpec spec;
    spec.dim = get_count("dim");
    spec.k = get_count("k");
    const auto sig = parse_reals(get("sigma"), "sigma");
    if (sig.size() != 1) throw InvalidArgument("gmm spec: sigma must be a single value");
    spec.sigma = sig[0];
    spec.weights = parse_reals(get("weights"), "weights");
    auto read_mean = [&](const std::string& key) {
        const auto v = parse_reals(get(key), key);
        if (v.size() != spec.dim) throw InvalidArgument("gmm spec: " + key + " has wrong length");
        return Vector(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    for (std::size_t k = 0; k < spec.k; ++k) spec.means_pos.push_back(read_mean("mean_pos." + std::to_string(k)));
    for (std::size_t k = 0; k < spec.k; ++k) spec.means_neg.push_back(read_mean("mean_neg." + std::to_string(k)));
    if (kv.size() != 5 + 2 * spec.k) throw InvalidArgument("gmm spec: unexpected extra keys");
    spec.validate();
    return spec;
}

void save_gmm_spec(const std::string& path, const GmmSpec& spec) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    write_gmm_spec(out, spec);
    if (!out) throw Error("failed writing " + path);
}

GmmSpec load_gmm_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_gmm_spec(in);
}

}  // namespace bprank
