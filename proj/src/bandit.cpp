#include "pex/bandit.hpp"

#include <cmath>

namespace pex {

FeasiblePolytope BanditInstance::feasible_polytope() const {
    std::vector<Halfspace> rows;
    rows.reserve(d);
    for (int i = 0; i < d; ++i) rows.push_back({constraints.row(i).transpose(), 0.0});
    return FeasiblePolytope::enumerate_vertices(rows, K);
}

BanditInstance build_instance(const EnvironmentSpec& spec) {
    BanditInstance inst;
    inst.K = static_cast<int>(spec.means.size());
    if (inst.K < 2) throw std::invalid_argument("instance: needs at least 2 arms");
    if (!spec.means.allFinite()) throw std::invalid_argument("instance: means must be finite");
    if (spec.sigma2 < 0) throw std::invalid_argument("instance: sigma2 must be >= 0");
    if (!(spec.delta > 0 && spec.delta < 1)) throw std::invalid_argument("instance: delta must be in (0,1)");
    if (spec.r < 0) throw std::invalid_argument("instance: r must be >= 0");
    if (spec.cost_noise_sd < 0) throw std::invalid_argument("instance: cost_noise_sd must be >= 0");
    inst.means = spec.means;
    inst.sigma2 = spec.sigma2;
    inst.cost_noise_sd = spec.cost_noise_sd;
    inst.r = spec.r;
    inst.delta = spec.delta;
    inst.constraints = spec.constraints;
    inst.d = spec.constraints.size() == 0 ? 0 : static_cast<int>(spec.constraints.rows());
    if (inst.d > 0 && spec.constraints.cols() != inst.K) {
        throw std::invalid_argument("instance: constraint matrix must have K columns");
    }
    if (inst.d == 0) inst.constraints.resize(0, inst.K);

    if (spec.mean_box_lo == 0.0 && spec.mean_box_hi == 0.0) {
        inst.mean_box_lo = spec.means.minCoeff() - 1.0;
        inst.mean_box_hi = spec.means.maxCoeff() + 1.0;
    } else {
        inst.mean_box_lo = spec.mean_box_lo;
        inst.mean_box_hi = spec.mean_box_hi;
    }
    if (!(inst.mean_box_lo < inst.mean_box_hi)) {
        throw std::invalid_argument("instance: mean_box requires lo < hi");
    }
    if (spec.means.minCoeff() <= inst.mean_box_lo || spec.means.maxCoeff() >= inst.mean_box_hi) {
        throw std::invalid_argument("instance: means must lie strictly inside mean_box");
    }

    // Slack over the simplex is attained at a basis vector.
    inst.slack = Vector::Zero(inst.d);
    for (int i = 0; i < inst.d; ++i) {
        inst.slack(i) = (-inst.constraints.row(i)).maxCoeff();
    }

    FeasiblePolytope poly = [&] {
        try {
            return inst.feasible_polytope();
        } catch (const InfeasibleError&) {
            throw InfeasibleError("instance: constraint set has no feasible policy");
        }
    }();
    // A non-zero slack vector must exist: every row strict at some feasible
    // vertex, so the vertex barycenter is strictly feasible.
    for (int i = 0; i < inst.d; ++i) {
        bool strict = false;
        for (const auto& v : poly.vertices()) {
            if (inst.constraints.row(i).dot(v) < -1e-12) {
                strict = true;
                break;
            }
        }
        if (!strict) {
            throw std::invalid_argument("instance: no strictly feasible policy for row " + std::to_string(i) +
                                        " (zero slack)");
        }
    }
    return inst;
}

Observation sample_step(const BanditInstance& instance, int arm, Rng& rng, long t) {
    if (arm < 0 || arm >= instance.K) throw std::out_of_range("sample_step: arm index out of range");
    Observation obs;
    obs.t = t;
    obs.arm = arm;
    const double sd = std::sqrt(instance.sigma2);
    std::normal_distribution<double> reward_noise(0.0, 1.0);
    obs.reward = instance.means(arm) + (sd > 0 ? sd * reward_noise(rng) : 0.0);
    obs.cost = Vector::Zero(instance.d);
    std::normal_distribution<double> cost_noise(0.0, 1.0);
    for (int i = 0; i < instance.d; ++i) {
        obs.cost(i) = instance.constraints(i, arm) +
                      (instance.cost_noise_sd > 0 ? instance.cost_noise_sd * cost_noise(rng) : 0.0);
    }
    return obs;
}

}  // namespace pex
