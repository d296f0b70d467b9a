#include "pex/estimator.hpp"

#include <cmath>

namespace pex {

void EstimatorState::update(const Observation& obs) {
    counts(obs.arm) += 1.0;
    reward_sums(obs.arm) += obs.reward;
    if (d() > 0) cost_sums.col(obs.arm) += obs.cost;
    ++t;
}

Vector EstimatorState::mu_hat() const {
    return reward_sums.array() / (counts.array() + v);
}

Matrix EstimatorState::A_hat() const {
    Matrix out = cost_sums;
    for (int a = 0; a < K(); ++a) out.col(a) /= (v + counts(a));
    return out;
}

double confidence_radius(const EstimatorState& state, double delta) {
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("confidence_radius: delta must be in (0,1)");
    const double logdet = (state.counts.array() + state.v).log().sum();
    return 1.0 + std::sqrt(0.5 * std::log(state.K() / delta) + 0.25 * logdet);
}

PessimisticModel pessimistic_matrix(const EstimatorState& state, double delta) {
    PessimisticModel model;
    model.mu_hat = state.mu_hat();
    model.A_hat = state.A_hat();
    model.f_radius = confidence_radius(state, delta);
    model.A_tilde = model.A_hat;
    for (int a = 0; a < state.K(); ++a) {
        model.A_tilde.col(a).array() -= model.f_radius / std::sqrt(state.v + state.counts(a));
    }
    return model;
}

double rho_radius(const EstimatorState& state, double delta, const Vector& omega) {
    const double f = confidence_radius(state, delta);
    const double norm_sq = (omega.array().square() / (state.counts.array() + state.v)).sum();
    return f * std::sqrt(norm_sq);
}

}  // namespace pex
