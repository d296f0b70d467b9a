#pragma once
#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Policy = Eigen::VectorXd;

// Halfspace a.pi <= b.
struct Halfspace {
    Vector a;
    double b;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProjectionResult {
    Vector point;
    bool converged = true;
};

// Bounded polytope {pi : a_i.pi <= b_i, sum pi = 1}. Rows include the
// K nonnegativity halfspaces -pi_a <= 0 appended after the caller's rows.
class FeasiblePolytope {
public:
    // Enumerates all basic feasible solutions: each (K-1)-subset of rows made
    // tight together with the simplex equality. Vertices deduplicated within
    // 1e-7 (L-inf); adjacency = active sets overlapping in >= K-2 rows.
    static FeasiblePolytope enumerate_vertices(const std::vector<Halfspace>& extra_rows, int K);

    int K() const { return K_; }
    const std::vector<Halfspace>& rows() const { return rows_; }
    const std::vector<Policy>& vertices() const { return vertices_; }
    const std::vector<std::vector<int>>& active_sets() const { return active_sets_; }
    const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }

    // Vertex scan for argmax c.pi; ties broken by lowest vertex index.
    std::pair<int, double> argmax_linear(const Vector& c) const;

    // Vertex-restricted r-good set: {i : means.v_i + r >= max_j means.v_j}.
    std::vector<int> r_good_vertices(const Vector& means, double r) const;

    bool contains(const Vector& pi, double tol = 1e-7) const;

    // Euclidean projection by Dykstra's alternating projections between the
    // simplex and each halfspace row. Result feasible within 1e-7 when
    // converged; otherwise the best iterate is returned with the flag unset.
    ProjectionResult project(const Vector& x, int max_cycles = 2000, double tol = 1e-8) const;

private:
    int K_ = 0;
    std::vector<Halfspace> rows_;
    std::vector<Policy> vertices_;
    std::vector<std::vector<int>> active_sets_;
    std::vector<std::vector<int>> adjacency_;
};

// Exact Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& x);

// Simplex with no extra rows (vertices e_1..e_K).
FeasiblePolytope simplex_polytope(int K);

}  // namespace pex
