#include "pex/stopping.hpp"

#include <cmath>

namespace pex {

double glr_statistic(const Vector& counts, const Vector& mu_hat, const FeasiblePolytope& poly, double r,
                     double sigma2) {
    return evaluate_D(counts, mu_hat, poly, r, sigma2).value;
}

double threshold_practical(long t, double delta) {
    const double tt = static_cast<double>(std::max<long>(t, 3));
    return std::log((1.0 + std::log(std::log(tt))) / delta);
}

double h_of(double u) { return u - std::log(u); }

double h_inverse(double y) {
    // h is increasing on [1, inf) with h(1) = 1; callers pass y >= 1.
    if (y <= 1.0) return 1.0;
    double lo = 1.0, hi = y + std::sqrt(2.0 * (y - 1.0)) + 10.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (h_of(mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {
double h_tilde(double z, double x) {
    if (x >= h_inverse(1.0 / std::log(z))) {
        const double hi = h_inverse(x);
        return std::exp(1.0 / hi) * hi;
    }
    return z * (x - std::log(std::log(z)));
}
}  // namespace

double calT(double x) {
    const double arg = (h_inverse(1.0 + x) + std::log(M_PI * M_PI / 3.0)) / 2.0;
    return 2.0 * h_tilde(1.5, arg);
}

double threshold_theoretical(long /*t*/, const Vector& counts, double delta, int K, int d, int S0) {
    if (S0 < 1) throw std::invalid_argument("threshold_theoretical: S0 must be >= 1");
    const double n_max = counts.maxCoeff();
    const double loglog = 3.0 * S0 * std::log(1.0 + std::log(n_max));
    const double x = (std::min(K, d) + std::log(1.0 / delta)) / S0;
    return loglog + S0 * calT(x);
}

double threshold(const StoppingConfig& cfg, long t, const Vector& counts, int K, int d) {
    if (cfg.mode == ThresholdMode::Practical) return threshold_practical(t, cfg.delta);
    const int S0 = cfg.S0 > 0 ? cfg.S0 : K;
    return threshold_theoretical(t, counts, cfg.delta, K, d, S0);
}

}  // namespace pex
