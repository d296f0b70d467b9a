#include "pex/polytope.hpp"

#include <algorithm>
#include <cmath>

namespace pex {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kDedupeTol = 1e-7;
constexpr int kMaxEnumK = 16;

// Advances a k-subset of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

FeasiblePolytope FeasiblePolytope::enumerate_vertices(const std::vector<Halfspace>& extra_rows, int K) {
    if (K < 1) throw std::invalid_argument("polytope: K must be >= 1");
    if (K > kMaxEnumK) throw CapabilityError("polytope: vertex enumeration supports K <= 16");
    FeasiblePolytope poly;
    poly.K_ = K;
    poly.rows_ = extra_rows;
    for (const auto& r : poly.rows_) {
        if (r.a.size() != K) throw std::invalid_argument("polytope: row dimension mismatch");
    }
    for (int a = 0; a < K; ++a) {
        Halfspace nonneg{Vector::Zero(K), 0.0};
        nonneg.a(a) = -1.0;
        poly.rows_.push_back(std::move(nonneg));
    }

    const int m = static_cast<int>(poly.rows_.size());
    const int k = K - 1;
    auto feasible = [&](const Vector& pi) {
        for (const auto& r : poly.rows_) {
            if (r.a.dot(pi) > r.b + kFeasTol) return false;
        }
        return std::abs(pi.sum() - 1.0) <= kFeasTol;
    };

    Matrix sys(K, K);
    Vector rhs(K);
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = i;
    bool more = (k <= m);
    if (k == 0) {
        // K = 1: the simplex is the point (1).
        Vector pi = Vector::Ones(1);
        if (feasible(pi)) poly.vertices_.push_back(pi);
        more = false;
    }
    while (more) {
        for (int i = 0; i < k; ++i) {
            sys.row(i) = poly.rows_[subset[i]].a.transpose();
            rhs(i) = poly.rows_[subset[i]].b;
        }
        sys.row(K - 1).setOnes();
        rhs(K - 1) = 1.0;
        Eigen::PartialPivLU<Matrix> lu(sys);
        // Rank-deficient subsets give no basic solution.
        if (std::abs(lu.determinant()) > 1e-12) {
            Vector pi = lu.solve(rhs);
            if ((sys * pi - rhs).lpNorm<Eigen::Infinity>() <= 1e-8 && feasible(pi)) {
                bool dup = false;
                for (const auto& v : poly.vertices_) {
                    if ((v - pi).lpNorm<Eigen::Infinity>() < kDedupeTol) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) poly.vertices_.push_back(pi);
            }
        }
        more = next_combination(subset, m);
    }
    if (poly.vertices_.empty()) throw InfeasibleError("polytope: empty feasible set");

    poly.active_sets_.resize(poly.vertices_.size());
    for (size_t i = 0; i < poly.vertices_.size(); ++i) {
        for (int r = 0; r < m; ++r) {
            if (std::abs(poly.rows_[r].a.dot(poly.vertices_[i]) - poly.rows_[r].b) <= kFeasTol) {
                poly.active_sets_[i].push_back(r);
            }
        }
    }
    poly.adjacency_.resize(poly.vertices_.size());
    for (size_t i = 0; i < poly.vertices_.size(); ++i) {
        for (size_t j = i + 1; j < poly.vertices_.size(); ++j) {
            std::vector<int> shared;
            std::set_intersection(poly.active_sets_[i].begin(), poly.active_sets_[i].end(),
                                  poly.active_sets_[j].begin(), poly.active_sets_[j].end(),
                                  std::back_inserter(shared));
            if (static_cast<int>(shared.size()) >= K - 2) {
                poly.adjacency_[i].push_back(static_cast<int>(j));
                poly.adjacency_[j].push_back(static_cast<int>(i));
            }
        }
    }
    return poly;
}

std::pair<int, double> FeasiblePolytope::argmax_linear(const Vector& c) const {
    int best = 0;
    double best_val = c.dot(vertices_[0]);
    for (size_t i = 1; i < vertices_.size(); ++i) {
        const double v = c.dot(vertices_[i]);
        if (v > best_val) {
            best_val = v;
            best = static_cast<int>(i);
        }
    }
    return {best, best_val};
}

std::vector<int> FeasiblePolytope::r_good_vertices(const Vector& means, double r) const {
    const double best = argmax_linear(means).second;
    std::vector<int> out;
    for (size_t i = 0; i < vertices_.size(); ++i) {
        if (means.dot(vertices_[i]) + r >= best) out.push_back(static_cast<int>(i));
    }
    return out;
}

bool FeasiblePolytope::contains(const Vector& pi, double tol) const {
    if (pi.size() != K_) return false;
    if (std::abs(pi.sum() - 1.0) > tol) return false;
    for (const auto& r : rows_) {
        if (r.a.dot(pi) > r.b + tol) return false;
    }
    return true;
}

Vector project_simplex(const Vector& x) {
    // Sort-based projection: u sorted descending, threshold tau from the
    // largest k with u_k > (sum_{i<=k} u_i - 1)/k.
    const int n = static_cast<int>(x.size());
    std::vector<double> u(x.data(), x.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double csum = 0.0, tau = 0.0;
    for (int i = 0; i < n; ++i) {
        csum += u[i];
        const double t = (csum - 1.0) / (i + 1);
        if (u[i] - t > 0) tau = t;
    }
    Vector out(n);
    for (int i = 0; i < n; ++i) out(i) = std::max(x(i) - tau, 0.0);
    return out;
}

ProjectionResult FeasiblePolytope::project(const Vector& x, int max_cycles, double tol) const {
    if (contains(x)) return {x, true};
    const size_t nsets = rows_.size() + 1;  // simplex first, then each halfspace
    std::vector<Vector> corr(nsets, Vector::Zero(K_));
    Vector y = x;
    Vector best = project_simplex(x);
    double best_viol = std::numeric_limits<double>::infinity();
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        const Vector y_prev = y;
        for (size_t s = 0; s < nsets; ++s) {
            const Vector z = y + corr[s];
            Vector p;
            if (s == 0) {
                p = project_simplex(z);
            } else {
                const auto& r = rows_[s - 1];
                const double excess = r.a.dot(z) - r.b;
                p = excess > 0 ? Vector(z - (excess / r.a.squaredNorm()) * r.a) : z;
            }
            corr[s] = z - p;
            y = p;
        }
        double viol = std::abs(y.sum() - 1.0);
        for (const auto& r : rows_) viol = std::max(viol, r.a.dot(y) - r.b);
        for (int a = 0; a < K_; ++a) viol = std::max(viol, -y(a));
        if (viol < best_viol) {
            best_viol = viol;
            best = y;
        }
        if ((y - y_prev).lpNorm<Eigen::Infinity>() < tol && viol <= 1e-7) {
            return {y, true};
        }
    }
    return {best, best_viol <= 1e-7};
}

FeasiblePolytope simplex_polytope(int K) {
    return FeasiblePolytope::enumerate_vertices({}, K);
}

}  // namespace pex
