#include "pex/metrics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace pex {

double violation_increment(const Matrix& A_true, const Vector& omega) {
    if (A_true.rows() == 0) return 0.0;
    return std::max(0.0, (A_true * omega).maxCoeff());
}

double shadow_price(const BanditInstance& instance) {
    if (instance.d == 0) return 1.0;
    return instance.slack.maxCoeff() / instance.slack.minCoeff();
}

Summary summarize(const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: empty record list");
    Summary s;
    s.algorithm = records.front().algorithm;
    s.n_seeds = static_cast<int>(records.size());
    std::vector<double> taus;
    int errors = 0;
    for (const auto& rec : records) {
        if (rec.algorithm != s.algorithm) throw std::invalid_argument("summarize: mixed algorithm ids");
        if (rec.censored) {
            ++s.censored;
        } else {
            taus.push_back(static_cast<double>(rec.tau));
        }
        if (!rec.correct) ++errors;
        s.mean_violation += rec.cum_violation;
    }
    s.mean_violation /= records.size();
    s.error_rate = static_cast<double>(errors) / records.size();
    if (taus.empty()) {
        s.median_tau = std::numeric_limits<double>::quiet_NaN();
        s.std_tau = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    std::sort(taus.begin(), taus.end());
    const size_t n = taus.size();
    s.median_tau = (n % 2 == 1) ? taus[n / 2] : 0.5 * (taus[n / 2 - 1] + taus[n / 2]);
    double mean = 0.0;
    for (double x : taus) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : taus) var += (x - mean) * (x - mean);
    s.std_tau = std::sqrt(var / n);
    return s;
}

ComplexityDiagnostics complexity_diagnostics(const BanditInstance& instance) {
    ComplexityDiagnostics diag;
    diag.shadow_price = shadow_price(instance);

    const double mu_star = instance.means.maxCoeff();
    double gap_sq = 0.0;
    for (int a = 0; a < instance.K; ++a) {
        const double g = mu_star - instance.means(a);
        gap_sq += g * g;
    }
    diag.gap_complexity_H = gap_sq > 0 ? 2.0 * instance.sigma2 / gap_sq : 0.0;

    const FeasiblePolytope poly = instance.feasible_polytope();
    const int opt = poly.argmax_linear(instance.means).first;

    // Condition number of the rows active at the optimal vertex.
    const auto& active = poly.active_sets()[opt];
    Matrix rows(active.size() + 1, instance.K);
    for (size_t i = 0; i < active.size(); ++i) rows.row(i) = poly.rows()[active[i]].a.transpose();
    rows.row(active.size()).setOnes();  // simplex equality
    Eigen::JacobiSVD<Matrix> svd(rows);
    const auto& sv = svd.singularValues();
    double smin = 0.0;
    for (int i = sv.size() - 1; i >= 0; --i) {
        if (sv(i) > 1e-12) {
            smin = sv(i);
            break;
        }
    }
    diag.condition_number = smin > 0 ? sv(0) / smin : 1.0;

    // c_known = min over neighbors of |mu.(pi* - pi')|^2 / ||pi* - pi'||^2.
    double cmin = std::numeric_limits<double>::infinity();
    for (int n : poly.adjacency()[opt]) {
        const Vector v = poly.vertices()[opt] - poly.vertices()[n];
        const double num = instance.means.dot(v);
        cmin = std::min(cmin, num * num / v.squaredNorm());
    }
    diag.c_known = std::isfinite(cmin) ? cmin : 0.0;
    return diag;
}

}  // namespace pex
