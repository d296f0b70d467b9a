#pragma once
#include <random>

#include "pex/polytope.hpp"

namespace pex {

using Rng = std::mt19937_64;

struct Observation {
    long t = 0;
    int arm = 0;
    double reward = 0.0;
    Vector cost;  // length d
};

struct EnvironmentSpec {
    Vector means;
    double sigma2 = 1.0;
    Matrix constraints;  // d x K, constraint form A pi <= 0
    double cost_noise_sd = 0.1;
    double r = 0.01;
    double delta = 0.01;
    double mean_box_lo = 0.0;  // instance domain; 0/0 = derive from means
    double mean_box_hi = 0.0;
};

// Ground-truth model. Immutable after construction; safe to share across runs.
struct BanditInstance {
    int K = 0;
    int d = 0;
    Vector means;
    double sigma2 = 1.0;
    Matrix constraints;  // d x K
    double cost_noise_sd = 0.1;
    double r = 0.01;
    double delta = 0.01;
    Vector slack;  // Gamma_i = max_{pi in simplex} (-A^i pi)
    double mean_box_lo = 0.0;
    double mean_box_hi = 0.0;

    FeasiblePolytope feasible_polytope() const;
};

// Validates the environment: finite means, sigma2 >= 0, delta in (0,1),
// r >= 0, non-empty feasible set, and a strictly feasible policy (every
// constraint row slack at some feasible point). Computes the slack vector
// by vertex scan over the simplex.
BanditInstance build_instance(const EnvironmentSpec& spec);

// One interaction: reward ~ N(means[arm], sigma2), cost_i ~ N(A[i][arm],
// cost_noise_sd^2). Draw order (reward first, then costs by row) is fixed,
// so outputs are deterministic given the generator state.
Observation sample_step(const BanditInstance& instance, int arm, Rng& rng, long t = 0);

}  // namespace pex
