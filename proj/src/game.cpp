#include "pex/game.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace pex {
namespace {

constexpr double kSupportTol = 1e-12;
const double kInf = std::numeric_limits<double>::infinity();

double min_neighbor_term(const Vector& weights, const Vector& means, const FeasiblePolytope& poly,
                         double r, double sigma2, int pi_idx, int* arg_neighbor) {
    const auto& neighbors = poly.adjacency()[pi_idx];
    double best = kInf;
    int arg = -1;
    for (int n : neighbors) {
        const double term = pair_term(means, weights, poly.vertices()[pi_idx], poly.vertices()[n], r, sigma2);
        if (arg < 0 || term < best) {
            best = term;
            arg = n;
        }
    }
    if (arg_neighbor) *arg_neighbor = arg;
    return best;
}

// Supergradient of the active pair term at omega, minus the linear penalty.
Vector term_gradient(const Vector& means, const Vector& omega, const Vector& pi, const Vector& pi_prime,
                     double r, double sigma2) {
    const Vector v = pi - pi_prime;
    const double gap = means.dot(v) - r;
    Vector grad = Vector::Zero(omega.size());
    if (gap <= 0) return grad;
    const double c = gap * gap;
    double denom = 0.0;
    bool zero_weight = false;
    for (int a = 0; a < v.size(); ++a) {
        if (std::abs(v(a)) > kSupportTol) {
            if (omega(a) <= kSupportTol) {
                zero_weight = true;
            } else {
                denom += v(a) * v(a) / omega(a);
            }
        }
    }
    denom *= 2.0 * sigma2;
    for (int a = 0; a < v.size(); ++a) {
        if (std::abs(v(a)) <= kSupportTol) continue;
        if (omega(a) <= kSupportTol) {
            // Term vanishes at omega_a = 0; marginal value of weight there.
            grad(a) = c / (2.0 * sigma2 * v(a) * v(a));
        } else if (!zero_weight) {
            grad(a) = c * 2.0 * sigma2 * v(a) * v(a) / (omega(a) * omega(a) * denom * denom);
        }
        // With another zero-weight support coordinate the term is pinned at 0
        // wherever omega_a moves, so leave those entries at 0.
    }
    return grad;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, int iters = 40) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double gaussian_kl(double x, double y, double sigma2) {
    if (sigma2 <= 0) throw std::invalid_argument("gaussian_kl: sigma2 must be > 0");
    const double diff = x - y;
    return diff * diff / (2.0 * sigma2);
}

ConfusingInstance confusing_instance(const Vector& means, const Vector& omega, const Vector& pi,
                                     const Vector& pi_prime, double r, double sigma2) {
    const Vector v = pi - pi_prime;
    if (v.lpNorm<Eigen::Infinity>() <= kSupportTol) {
        throw std::invalid_argument("confusing_instance: pi and pi_prime coincide");
    }
    double denom = 0.0;
    Vector w = omega;
    for (int a = 0; a < v.size(); ++a) {
        if (std::abs(v(a)) > kSupportTol) {
            w(a) = std::max(w(a), kSupportTol);
            denom += v(a) * v(a) / w(a);
        }
    }
    ConfusingInstance out;
    out.gamma = (r - means.dot(v)) / (sigma2 * denom);
    out.lambda = means;
    for (int a = 0; a < v.size(); ++a) {
        if (std::abs(v(a)) > kSupportTol) out.lambda(a) += out.gamma * v(a) * sigma2 / w(a);
    }
    return out;
}

double pair_term(const Vector& means, const Vector& weights, const Vector& pi, const Vector& pi_prime,
                 double r, double sigma2) {
    const Vector v = pi - pi_prime;
    const double gap = means.dot(v) - r;
    if (gap <= 0) return 0.0;
    double denom = 0.0;
    for (int a = 0; a < v.size(); ++a) {
        if (std::abs(v(a)) > kSupportTol) {
            if (weights(a) <= 0.0) return 0.0;
            denom += v(a) * v(a) / weights(a);
        }
    }
    return gap * gap / (2.0 * sigma2 * denom);
}

DResult evaluate_D(const Vector& weights, const Vector& means, const FeasiblePolytope& poly, double r,
                   double sigma2) {
    if (poly.vertices().size() < 2) {
        throw DegenerateGeometryError("evaluate_D: polytope has fewer than two vertices");
    }
    DResult out;
    out.value = -kInf;
    for (int pi_idx : poly.r_good_vertices(means, r)) {
        int arg = -1;
        const double m = min_neighbor_term(weights, means, poly, r, sigma2, pi_idx, &arg);
        if (arg < 0) throw DegenerateGeometryError("evaluate_D: vertex without neighbors");
        if (m > out.value) {
            out.value = m;
            out.pi_star = pi_idx;
            out.neighbor = arg;
        }
    }
    return out;
}

DResult evaluate_D_penalized(const Vector& weights, const Vector& means, const FeasiblePolytope& poly,
                             double r, double sigma2, const Vector& multiplier, const Matrix& A_tilde) {
    DResult out = evaluate_D(weights, means, poly, r, sigma2);
    if (multiplier.size() > 0 && A_tilde.rows() > 0) {
        out.value -= multiplier.dot(A_tilde * weights);
    }
    return out;
}

double multiplier_box(double D_unpenalized, const Matrix& A_tilde, const Vector& omega, double b_max) {
    if (A_tilde.rows() == 0) return 0.0;
    const double gamma = (-(A_tilde * omega)).minCoeff();
    if (gamma <= 0) return b_max;
    return std::max(D_unpenalized, 0.0) / gamma;
}

Vector multiplier_argmin(const Matrix& A_tilde, const Vector& omega, double B) {
    Vector l = Vector::Zero(A_tilde.rows());
    if (A_tilde.rows() == 0) return l;
    const Vector s = A_tilde * omega;
    int worst = 0;
    for (int i = 1; i < s.size(); ++i) {
        if (s(i) > s(worst)) worst = i;
    }
    if (s(worst) > 0) l(worst) = B;
    return l;
}

Vector optimize_allocation(const Vector& means, const FeasiblePolytope& poly, double r, double sigma2,
                           const Vector& multiplier, const Matrix& A_tilde, int pi_star_idx,
                           const AllocationOptions& opts, const FeasiblePolytope* domain) {
    const FeasiblePolytope& dom = domain ? *domain : poly;
    const auto& dom_verts = dom.vertices();
    const int K = poly.K();

    Vector penalty = Vector::Zero(K);  // (A_tilde^T l)
    if (multiplier.size() > 0 && A_tilde.rows() > 0 && multiplier.lpNorm<Eigen::Infinity>() > 0) {
        penalty = A_tilde.transpose() * multiplier;
    }
    auto value = [&](const Vector& w) {
        return min_neighbor_term(w, means, poly, r, sigma2, pi_star_idx, nullptr) - penalty.dot(w);
    };

    Vector omega = Vector::Zero(K);
    for (const auto& v : dom_verts) omega += v;
    omega /= static_cast<double>(dom_verts.size());

    Vector best = omega;
    double best_val = value(omega);
    for (int k = 0; k < opts.budget; ++k) {
        int active = -1;
        min_neighbor_term(omega, means, poly, r, sigma2, pi_star_idx, &active);
        if (active < 0) break;
        Vector grad = term_gradient(means, omega, poly.vertices()[pi_star_idx], poly.vertices()[active],
                                    r, sigma2) -
                      penalty;
        int s = 0;
        double s_val = grad.dot(dom_verts[0]);
        for (size_t i = 1; i < dom_verts.size(); ++i) {
            const double g = grad.dot(dom_verts[i]);
            if (g > s_val) {
                s_val = g;
                s = static_cast<int>(i);
            }
        }
        double step;
        if (opts.line_search) {
            const Vector dir = dom_verts[s] - omega;
            step = golden_section_max([&](double t) { return value(omega + t * dir); }, 0.0, 1.0);
        } else {
            step = 2.0 / (k + 2.0);
        }
        omega = (1.0 - step) * omega + step * dom_verts[s];
        const double val = value(omega);
        if (val > best_val) {
            best_val = val;
            best = omega;
        }
    }
    return best;
}

CharacteristicTime characteristic_time(const Vector& means, const FeasiblePolytope& poly, double r,
                                       double sigma2, int budget) {
    const FeasiblePolytope simplex = simplex_polytope(poly.K());
    const Vector no_mult;
    const Matrix no_rows;
    AllocationOptions opts;
    opts.budget = budget;
    opts.line_search = true;
    double best = 0.0;
    for (int pi_idx : poly.r_good_vertices(means, r)) {
        if (poly.adjacency()[pi_idx].empty()) {
            throw DegenerateGeometryError("characteristic_time: vertex without neighbors");
        }
        const Vector omega =
            optimize_allocation(means, poly, r, sigma2, no_mult, no_rows, pi_idx, opts, &simplex);
        best = std::max(best, min_neighbor_term(omega, means, poly, r, sigma2, pi_idx, nullptr));
    }
    if (best <= 0.0) return {kInf, true};
    return {1.0 / best, false};
}

CharacteristicTime characteristic_time_pessimistic(const Vector& means, const Matrix& A_tilde, double r,
                                                   double sigma2, int rounds, int budget) {
    const int K = static_cast<int>(A_tilde.cols());
    std::vector<Halfspace> rows;
    for (int i = 0; i < A_tilde.rows(); ++i) rows.push_back({A_tilde.row(i).transpose(), 0.0});
    const FeasiblePolytope poly = FeasiblePolytope::enumerate_vertices(rows, K);
    const FeasiblePolytope simplex = simplex_polytope(K);
    const int pi_idx = poly.argmax_linear(means).first;
    AllocationOptions opts;
    opts.budget = budget;
    opts.line_search = true;

    Vector l = Vector::Zero(A_tilde.rows());
    double D = 0.0;
    for (int round = 0; round < rounds; ++round) {
        const Vector omega = optimize_allocation(means, poly, r, sigma2, l, A_tilde, pi_idx, opts, &simplex);
        D = evaluate_D_penalized(omega, means, poly, r, sigma2, l, A_tilde).value;
        const double B = multiplier_box(std::max(D, 0.0), A_tilde, omega);
        l = multiplier_argmin(A_tilde, omega, B);
    }
    if (D <= 0.0) return {kInf, true};
    return {1.0 / D, false};
}

}  // namespace pex
