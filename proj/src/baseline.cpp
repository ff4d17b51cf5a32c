#include "bprank/baseline.hpp"

#include <cmath>

#include "bprank/eval.hpp"
#include "bprank/rng.hpp"

namespace bprank {

void SgdConfig::validate() const {
    if (!(step_size >= 0.0) || !std::isfinite(step_size)) throw InvalidArgument("step size must be >= 0");
    if (budget == 0) throw InvalidArgument("sgd budget must be >= 1");
    if (!(w_star > 0.0)) throw InvalidArgument("w_star must be positive");
}

RankerWeights train_pairwise_sgd(const Dataset& data, const SgdConfig& cfg) {
    require_trainable(data);
    cfg.validate();
    const auto d = static_cast<Eigen::Index>(data.dim);
    Vector w = Vector::Zero(d);
    Vector diff(d);
    Rng rng(cfg.seed);
    const auto n1 = static_cast<std::uint64_t>(data.n1());
    const auto n0 = static_cast<std::uint64_t>(data.n0());
    for (std::uint64_t t = 0; t < cfg.budget; ++t) {
        const auto i = static_cast<Eigen::Index>(rng.index(n1));
        const auto j = static_cast<Eigen::Index>(rng.index(n0));
        diff = data.positives.row(i).transpose() - data.negatives.row(j).transpose();
        const double residual = w.dot(diff) - 1.0;
        w -= cfg.step_size * residual * diff;
        const double n = w.norm();
        if (n > cfg.w_star) w *= cfg.w_star / n;
    }
    return RankerWeights{std::move(w)};
}

const std::vector<double>& default_step_grid() {
    static const std::vector<double> grid{1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0};
    return grid;
}

SgdTuning tune_pairwise_sgd(const Dataset& data, SgdConfig cfg, const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidArgument("step-size grid is empty");
    SgdTuning best;
    bool first = true;
    for (double step : grid) {
        cfg.step_size = step;
        auto w = train_pairwise_sgd(data, cfg);
        const double risk = phi_risk(data, w);
        if (first || risk < best.train_phi_risk || (risk == best.train_phi_risk && step < best.step_size)) {
            best = {step, std::move(w), risk};
            first = false;
        }
    }
    return best;
}

}  // namespace bprank
