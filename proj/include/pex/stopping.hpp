#pragma once
#include "pex/game.hpp"

namespace pex {

enum class ThresholdMode { Practical, Theoretical };

struct StoppingConfig {
    ThresholdMode mode = ThresholdMode::Practical;
    int S0 = 0;  // 0 = use K
    double delta = 0.01;
};

// GLR statistic Z = max over r-good vertices of the count-weighted KL to the
// nearest alternative, computed exactly via the neighbor minimization.
double glr_statistic(const Vector& counts, const Vector& mu_hat, const FeasiblePolytope& poly, double r,
                     double sigma2);

// beta(t,delta) = ln((1 + ln ln max(t,3)) / delta).
double threshold_practical(long t, double delta);

// beta(t,delta) = 3 S0 ln(1 + ln max_a N_a) + S0 T((K^d + ln(1/delta))/S0)
// with T from the h / h_tilde chain; h^-1 by bisection on u >= 1.
double threshold_theoretical(long t, const Vector& counts, double delta, int K, int d, int S0);

double threshold(const StoppingConfig& cfg, long t, const Vector& counts, int K, int d);

// Exposed for the duplicate-implementation oracle tests.
double h_of(double u);        // u - ln u, u >= 1
double h_inverse(double y);   // bisection on [1, y + sqrt(2(y-1)) + 10]
double calT(double x);        // T(x) = 2 h~_{3/2}((h^-1(1+x) + ln(pi^2/3)) / 2)

}  // namespace pex
