#pragma once
#include "pex/bandit.hpp"

namespace pex {

// Ridge-regularized running sums. The design matrix is diagonal because
// actions are canonical basis vectors: Sigma_t = diag(v + N_a).
struct EstimatorState {
    double v = 1.0;
    Vector counts;       // N_a
    Vector reward_sums;  // sum of rewards per arm
    Matrix cost_sums;    // d x K accumulator
    long t = 0;

    EstimatorState() = default;
    EstimatorState(int K, int d, double ridge = 1.0)
        : v(ridge), counts(Vector::Zero(K)), reward_sums(Vector::Zero(K)), cost_sums(Matrix::Zero(d, K)) {
        if (ridge <= 0) throw std::invalid_argument("estimator: ridge v must be > 0");
    }

    int K() const { return static_cast<int>(counts.size()); }
    int d() const { return static_cast<int>(cost_sums.rows()); }

    void update(const Observation& obs);

    Vector mu_hat() const;
    Matrix A_hat() const;
};

struct PessimisticModel {
    Vector mu_hat;
    Matrix A_hat;
    Matrix A_tilde;  // entrywise A_hat[i][a] - f / sqrt(v + N_a)
    double f_radius = 0.0;
};

// f(t,delta) = 1 + sqrt(0.5 ln(K/delta) + 0.25 ln det Sigma_t), with
// ln det Sigma_t = sum_a ln(v + N_a). Non-decreasing in every N_a.
double confidence_radius(const EstimatorState& state, double delta);

PessimisticModel pessimistic_matrix(const EstimatorState& state, double delta);

// rho(t,delta) = f(t,delta) * ||omega||_{Sigma_t^-1}; violation diagnostic.
double rho_radius(const EstimatorState& state, double delta, const Vector& omega);

}  // namespace pex
