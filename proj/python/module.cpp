// Python bindings for the bprank core.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bprank/baseline.hpp"
#include "bprank/bounds.hpp"
#include "bprank/core.hpp"
#include "bprank/eval.hpp"
#include "bprank/experiments.hpp"
#include "bprank/io.hpp"
#include "bprank/model_file.hpp"
#include "bprank/moments.hpp"
#include "bprank/solver.hpp"
#include "bprank/synth.hpp"

namespace py = pybind11;
using namespace bprank;

namespace {

RankerWeights as_weights(const Vector& w) { return RankerWeights{w}; }

}  // namespace

PYBIND11_MODULE(_bprank, m) {
    m.doc() = "Bipartite ranking with the pairwise squared loss (BBR and LCBR)";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<UntrainableDataset>(m, "UntrainableDataset", error.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
    py::register_exception<InvalidMoments>(m, "InvalidMoments", error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    auto parse_error = py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<LabelError>(m, "LabelError", parse_error.ptr());

    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](const RowMatrix& pos, const RowMatrix& neg) { return Dataset(pos, neg); }),
             py::arg("positives"), py::arg("negatives"))
        .def_readonly("positives", &Dataset::positives)
        .def_readonly("negatives", &Dataset::negatives)
        .def_readonly("dim", &Dataset::dim)
        .def_property_readonly("n1", &Dataset::n1)
        .def_property_readonly("n0", &Dataset::n0)
        .def_property_readonly("skew", &Dataset::skew)
        .def("__len__", &Dataset::size);

    py::class_<ProblemConfig>(m, "ProblemConfig")
        .def(py::init([](double x_star, double w_star) {
                 ProblemConfig c{x_star, w_star};
                 c.validate();
                 return c;
             }),
             py::arg("x_star") = 1.0, py::arg("w_star") = 1.0)
        .def_readwrite("x_star", &ProblemConfig::x_star)
        .def_readwrite("w_star", &ProblemConfig::w_star);

    py::class_<PairMoments>(m, "PairMoments")
        .def(py::init([](const Vector& mu, const Matrix& sigma) { return PairMoments{mu, sigma, AnalyticProvenance{}}; }),
             py::arg("mu"), py::arg("sigma"))
        .def_readonly("mu", &PairMoments::mu)
        .def_readonly("sigma", &PairMoments::sigma);

    py::class_<SolveDiagnostics>(m, "SolveDiagnostics")
        .def_readonly("constrained_active", &SolveDiagnostics::constrained_active)
        .def_readonly("lambda_", &SolveDiagnostics::lambda)
        .def_readonly("kkt_residual", &SolveDiagnostics::kkt_residual)
        .def_readonly("objective_value", &SolveDiagnostics::objective_value)
        .def_readonly("iterations", &SolveDiagnostics::iterations);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("auc", &EvalReport::auc)
        .def_readonly("auc_risk", &EvalReport::auc_risk)
        .def_readonly("phi_risk", &EvalReport::phi_risk)
        .def_readonly("n_pairs", &EvalReport::n_pairs);

    m.def("scale_to_ball", &scale_to_ball, py::arg("data"), py::arg("x_star"));
    m.def("ball_scale_factor", &ball_scale_factor, py::arg("data"), py::arg("x_star"));

    m.def("batch_moments_naive", &batch_moments_naive, py::arg("data"));
    m.def("batch_moments_fast", &batch_moments_fast, py::arg("data"));
    m.def(
        "subsample_moments",
        [](const Dataset& d, std::uint64_t s, std::uint64_t seed) { return subsample_moments(d, {s, seed}); },
        py::arg("data"), py::arg("s"), py::arg("seed"));

    m.def(
        "solve_erm",
        [](const PairMoments& pm, const ProblemConfig& cfg) {
            auto r = solve_erm(pm, cfg);
            return py::make_tuple(r.weights.w, r.diagnostics);
        },
        py::arg("moments"), py::arg("config"), "Returns (w, diagnostics).");

    m.def(
        "train_bbr",
        [](const Dataset& d, const ProblemConfig& cfg, bool naive) { return train_bbr(d, cfg, {}, naive).weights.w; },
        py::arg("data"), py::arg("config"), py::arg("naive") = false);
    m.def(
        "train_lcbr",
        [](const Dataset& d, std::uint64_t s, std::uint64_t seed, const ProblemConfig& cfg) {
            return train_lcbr(d, s, seed, cfg).weights.w;
        },
        py::arg("data"), py::arg("s"), py::arg("seed"), py::arg("config"));
    m.def(
        "train_pairwise_sgd",
        [](const Dataset& d, double step, std::uint64_t budget, std::uint64_t seed, double w_star) {
            return train_pairwise_sgd(d, SgdConfig{step, budget, seed, w_star}).w;
        },
        py::arg("data"), py::arg("step_size"), py::arg("budget"), py::arg("seed"), py::arg("w_star"));

    m.def("auc", [](const Dataset& d, const Vector& w) { return auc_fast(d, as_weights(w)); }, py::arg("data"), py::arg("w"));
    m.def("auc_naive", [](const Dataset& d, const Vector& w) { return auc_naive(d, as_weights(w)); }, py::arg("data"),
          py::arg("w"));
    m.def("phi_risk", [](const Dataset& d, const Vector& w) { return phi_risk(d, as_weights(w)); }, py::arg("data"),
          py::arg("w"));
    m.def("evaluate", [](const Dataset& d, const Vector& w) { return evaluate(d, as_weights(w)); }, py::arg("data"),
          py::arg("w"));
    m.def(
        "expected_phi_risk",
        [](const PairMoments& pm, const Vector& w) { return expected_phi_risk(pm, as_weights(w)); },
        py::arg("moments"), py::arg("w"));

    py::class_<GmmSpec>(m, "GmmSpec")
        .def_readonly("dim", &GmmSpec::dim)
        .def_readonly("k", &GmmSpec::k)
        .def_readonly("weights", &GmmSpec::weights)
        .def_readonly("sigma", &GmmSpec::sigma)
        .def_readonly("means_pos", &GmmSpec::means_pos)
        .def_readonly("means_neg", &GmmSpec::means_neg);
    m.def("random_gmm_spec", &random_gmm_spec, py::arg("dim"), py::arg("k"), py::arg("sigma"), py::arg("seed"));
    m.def("sample_dataset", &sample_dataset, py::arg("spec"), py::arg("n1"), py::arg("n0"), py::arg("seed"));
    m.def("analytic_pair_moments", &analytic_pair_moments, py::arg("spec"));
    m.def(
        "optimal_phi_ranker", [](const GmmSpec& s, const ProblemConfig& cfg) { return optimal_phi_ranker(s, cfg).weights.w; },
        py::arg("spec"), py::arg("config"));

    m.def(
        "load_libsvm",
        [](const std::string& path, std::optional<std::size_t> dim) { return load_libsvm(path, dim); },
        py::arg("path"), py::arg("dim") = py::none());
    m.def(
        "save_model",
        [](const std::string& path, const Vector& w, double w_star) { save_model(path, ModelFile{w_star, RankerWeights{w}}); },
        py::arg("path"), py::arg("w"), py::arg("w_star"));
    m.def(
        "load_model",
        [](const std::string& path) {
            auto f = load_model(path);
            return py::make_tuple(f.weights.w, f.w_star);
        },
        py::arg("path"), "Returns (w, w_star).");

    py::class_<BoundInputs>(m, "BoundInputs")
        .def(py::init([](std::size_t dim, double x_star, double w_star, double rho, double n, double sigma_n_opnorm,
                         double epsilon, double delta) {
                 BoundInputs in{dim, x_star, w_star, rho, n, sigma_n_opnorm, epsilon, delta};
                 in.validate();
                 return in;
             }),
             py::arg("dim") = 1, py::arg("x_star") = 1.0, py::arg("w_star") = 1.0, py::arg("rho") = 0.5,
             py::arg("n") = 1.0, py::arg("sigma_n_opnorm") = 0.0, py::arg("epsilon") = 0.1, py::arg("delta") = 0.05);
    m.def(
        "constants_c1_c2",
        [](double x, double w) {
            auto k = constants_c1_c2(x, w);
            return py::make_tuple(k.c1, k.c2);
        },
        py::arg("x_star"), py::arg("w_star"));
    m.def("theorem1_log_tail", &theorem1_log_tail, py::arg("inputs"));
    m.def("lemma1_log_tail", &lemma1_log_tail, py::arg("inputs"));
    m.def("theorem3_log_tail", &theorem3_log_tail, py::arg("inputs"));
    m.def("theorem2_min_subsample", &theorem2_min_subsample, py::arg("inputs"));
    m.def("theorem3_min_subsample", &theorem3_min_subsample, py::arg("inputs"));
    m.def("tail_probability", &tail_probability, py::arg("log_tail"));
}
