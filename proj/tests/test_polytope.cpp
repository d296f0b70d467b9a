#include <doctest.h>

#include <algorithm>
#include <random>

#include "pex/config.hpp"
#include "pex/polytope.hpp"

using namespace pex;

namespace {

bool has_vertex(const FeasiblePolytope& poly, const std::vector<double>& coords, double tol = 1e-7) {
    Vector target(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) target(i) = coords[i];
    for (const auto& v : poly.vertices()) {
        if ((v - target).lpNorm<Eigen::Infinity>() < tol) return true;
    }
    return false;
}

Vector vec(std::initializer_list<double> values) {
    Vector out(values.size());
    int i = 0;
    for (double v : values) out(i++) = v;
    return out;
}

}  // namespace

TEST_CASE("bare simplex vertices and adjacency") {
    const auto poly = simplex_polytope(3);
    REQUIRE(poly.vertices().size() == 3);
    CHECK(has_vertex(poly, {1, 0, 0}));
    CHECK(has_vertex(poly, {0, 1, 0}));
    CHECK(has_vertex(poly, {0, 0, 1}));
    for (int i = 0; i < 3; ++i) CHECK(poly.adjacency()[i].size() == 2);
}

TEST_CASE("K=3 with pi1 <= 0.5") {
    const auto poly = FeasiblePolytope::enumerate_vertices({{vec({1, 0, 0}), 0.5}}, 3);
    REQUIRE(poly.vertices().size() == 4);
    CHECK(has_vertex(poly, {0, 1, 0}));
    CHECK(has_vertex(poly, {0, 0, 1}));
    CHECK(has_vertex(poly, {0.5, 0.5, 0}));
    CHECK(has_vertex(poly, {0.5, 0, 0.5}));
}

TEST_CASE("setup1 constraint rows give the capped optimal vertex") {
    const auto inst = build_instance(preset_environment("setup1-hard"));
    const auto poly = inst.feasible_polytope();
    CHECK(has_vertex(poly, {0.5, 0, 0, 0.5, 0, 0, 0}));
    const auto [idx, val] = poly.argmax_linear(inst.means);
    CHECK((poly.vertices()[idx] - vec({0.5, 0, 0, 0.5, 0, 0, 0})).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(val == doctest::Approx(0.95).epsilon(1e-9));
}

TEST_CASE("argmax on simplex picks the best arm") {
    const auto poly = simplex_polytope(7);
    const Vector mu = vec({1.5, 1.0, 0.5, 0.4, 0.3, 0.2, 0.1});
    const auto [idx, val] = poly.argmax_linear(mu);
    CHECK(poly.vertices()[idx](0) == doctest::Approx(1.0));
    CHECK(val == doctest::Approx(1.5));
}

TEST_CASE("imdb optimal policy") {
    const auto inst = build_instance(preset_environment("imdb"));
    const auto poly = inst.feasible_polytope();
    const auto [idx, val] = poly.argmax_linear(inst.means);
    const Vector expected = vec({0.3, 0.3, 0, 0, 0.4, 0, 0, 0, 0, 0, 0, 0});
    CHECK((poly.vertices()[idx] - expected).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("r-good vertex sets") {
    const auto inst = build_instance(preset_environment("setup1-hard"));
    const auto poly = inst.feasible_polytope();
    SUBCASE("r=0 keeps only the optimum") {
        const auto good = poly.r_good_vertices(inst.means, 0.0);
        REQUIRE(good.size() == 1);
        CHECK((poly.vertices()[good[0]] - vec({0.5, 0, 0, 0.5, 0, 0, 0})).lpNorm<Eigen::Infinity>() <
              1e-9);
    }
    SUBCASE("r=0.01 still isolates the optimum") {
        CHECK(poly.r_good_vertices(inst.means, 0.01).size() == 1);
    }
    SUBCASE("huge r saturates") {
        CHECK(poly.r_good_vertices(inst.means, 100.0).size() == poly.vertices().size());
    }
}

TEST_CASE("projection") {
    SUBCASE("feasible points are fixed") {
        const auto poly = simplex_polytope(3);
        const Vector x = vec({0.2, 0.3, 0.5});
        CHECK((poly.project(x).point - x).lpNorm<Eigen::Infinity>() < 1e-9);
    }
    SUBCASE("simplex projection of (2,0)") {
        const auto poly = simplex_polytope(2);
        const auto res = poly.project(vec({2, 0}));
        CHECK(res.converged);
        CHECK((res.point - vec({1, 0})).lpNorm<Eigen::Infinity>() < 1e-6);
    }
    SUBCASE("halfspace pulls mass off the capped arm") {
        const auto poly = FeasiblePolytope::enumerate_vertices({{vec({1, 0, 0}), 0.5}}, 3);
        const auto res = poly.project(vec({1, 0, 0}));
        CHECK(res.converged);
        CHECK((res.point - vec({0.5, 0.25, 0.25})).lpNorm<Eigen::Infinity>() < 1e-5);
        CHECK(poly.contains(res.point, 1e-7));
    }
}

TEST_CASE("contains") {
    const auto poly = FeasiblePolytope::enumerate_vertices({{vec({1, 0, 0}), 0.5}}, 3);
    for (const auto& v : poly.vertices()) CHECK(poly.contains(v));
    CHECK_FALSE(poly.contains(vec({1, 0, 0})));
    const Vector mid = 0.5 * (poly.vertices()[0] + poly.vertices()[1]);
    CHECK(poly.contains(mid));
}

TEST_CASE("errors") {
    // pi1 >= 2 is impossible on the simplex: -pi1 + 2 sum(pi) <= 0.
    CHECK_THROWS_AS(FeasiblePolytope::enumerate_vertices({{vec({1, 2, 2}), 0.0}}, 3), InfeasibleError);
    CHECK_THROWS_AS(simplex_polytope(17), CapabilityError);
}

TEST_CASE("adjacency symmetry on random polytopes") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        const int K = 3 + static_cast<int>(rng() % 3);
        std::vector<Halfspace> rows;
        for (int i = 0; i < 2; ++i) {
            Vector a(K);
            for (int k = 0; k < K; ++k) a(k) = gauss(rng);
            rows.push_back({a, 0.3});
        }
        const auto poly = FeasiblePolytope::enumerate_vertices(rows, K);
        const auto& adj = poly.adjacency();
        for (size_t i = 0; i < adj.size(); ++i) {
            for (int j : adj[i]) {
                const auto& back = adj[j];
                CHECK(std::find(back.begin(), back.end(), static_cast<int>(i)) != back.end());
            }
        }
    }
}

TEST_CASE("loosening rhs keeps old vertices feasible") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        const int K = 4;
        std::vector<Halfspace> tight, loose;
        for (int i = 0; i < 2; ++i) {
            Vector a(K);
            for (int k = 0; k < K; ++k) a(k) = gauss(rng);
            tight.push_back({a, 0.2});
            loose.push_back({a, 0.2 + 0.3 * (i + 1)});
        }
        FeasiblePolytope p1;
        try {
            p1 = FeasiblePolytope::enumerate_vertices(tight, K);
        } catch (const InfeasibleError&) {
            continue;
        }
        const auto p2 = FeasiblePolytope::enumerate_vertices(loose, K);
        for (const auto& v : p1.vertices()) CHECK(p2.contains(v, 1e-7));
    }
}

TEST_CASE("vertex argmax dominates projected random points") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    const auto poly = FeasiblePolytope::enumerate_vertices(
        {{vec({1, 1, 0, 0}), 0.6}, {vec({0, 1, 1, 0}), 0.7}}, 4);
    const Vector c = vec({0.9, 0.4, 0.7, 0.1});
    const double best = poly.argmax_linear(c).second;
    for (int i = 0; i < 10000; ++i) {
        Vector x(4);
        for (int k = 0; k < 4; ++k) x(k) = gauss(rng);
        const Vector p = poly.project(x).point;
        CHECK(c.dot(p) <= best + 1e-6);
    }
}
