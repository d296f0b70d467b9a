#pragma once
#include "pex/polytope.hpp"

namespace pex {

// KL divergence between unit-variance-scaled Gaussians: (x-y)^2 / (2 sigma2).
double gaussian_kl(double x, double y, double sigma2);

struct ConfusingInstance {
    Vector lambda;
    double gamma = 0.0;
};

// Closed-form minimizer of sum_a w_a d(mu_a, lambda_a) subject to
// lambda.(pi - pi') = r: lambda_a = mu_a + gamma v_a sigma2 / w_a with
// v = pi - pi' and gamma = (r - mu.v) / (sigma2 sum_a v_a^2 / w_a).
// Weights on the support of v are floored at 1e-12 (continuous limit);
// the boundary identity lambda.v = r holds exactly either way.
ConfusingInstance confusing_instance(const Vector& means, const Vector& omega, const Vector& pi,
                                     const Vector& pi_prime, double r, double sigma2);

// [(mu.v - r)_+]^2 / (2 sigma2 sum_{v_a != 0} v_a^2 / w_a). Returns 0 when
// some w_a = 0 on the support of v (the denominator diverges).
double pair_term(const Vector& means, const Vector& weights, const Vector& pi, const Vector& pi_prime,
                 double r, double sigma2);

struct DResult {
    double value = 0.0;
    int pi_star = -1;   // maximizing r-good vertex index
    int neighbor = -1;  // its minimizing neighbor index
};

// max over r-good vertices pi of min over neighbors pi' of pair_term,
// using the given weights (an allocation or raw counts). Ties go to the
// lowest vertex index.
DResult evaluate_D(const Vector& weights, const Vector& means, const FeasiblePolytope& poly, double r,
                   double sigma2);

// Same, minus multiplier . (A_tilde weights).
DResult evaluate_D_penalized(const Vector& weights, const Vector& means, const FeasiblePolytope& poly,
                             double r, double sigma2, const Vector& multiplier, const Matrix& A_tilde);

// Multiplier box bound B = D / gamma with gamma = min_i(-A_tilde^i omega);
// capped at b_max when gamma <= 0 (transient infeasible allocations).
double multiplier_box(double D_unpenalized, const Matrix& A_tilde, const Vector& omega,
                      double b_max = 100.0);

// argmin over {l >= 0, ||l||_1 <= B} of -l . A_tilde omega: zero when
// A_tilde omega <= 0, else B e_i* with i* the most violated row.
Vector multiplier_argmin(const Matrix& A_tilde, const Vector& omega, double B);

struct AllocationOptions {
    int budget = 300;
    bool line_search = false;  // default: step 2/(k+2)
};

// Frank-Wolfe maximization of
//   omega -> min_{pi' in nu(pi_star)} pair_term(omega) - multiplier.A_tilde omega
// over domain's vertex hull, returning the best observed iterate. The
// neighbor structure comes from `poly`; `domain` may differ (e.g. the bare
// simplex for lower-bound evaluation).
Vector optimize_allocation(const Vector& means, const FeasiblePolytope& poly, double r, double sigma2,
                           const Vector& multiplier, const Matrix& A_tilde, int pi_star_idx,
                           const AllocationOptions& opts = {}, const FeasiblePolytope* domain = nullptr);

struct CharacteristicTime {
    double T = 0.0;
    bool infinite = false;
};

// T^-1 = max_{omega in simplex} max_{pi r-good} min_{pi' in nu(pi)} pair_term.
// Infinite (flagged) when every r-good term clamps to zero.
CharacteristicTime characteristic_time(const Vector& means, const FeasiblePolytope& poly, double r,
                                       double sigma2, int budget = 1200);

// Pessimistic variant: alternates (allocation, multiplier box, multiplier
// argmin) for `rounds` outer rounds on the polytope of A_tilde.
CharacteristicTime characteristic_time_pessimistic(const Vector& means, const Matrix& A_tilde, double r,
                                                   double sigma2, int rounds = 5, int budget = 1200);

}  // namespace pex
