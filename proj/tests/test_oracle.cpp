#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nslp/errors.hpp"
#include "nslp/oracle.hpp"
#include "nslp/scenarios.hpp"
#include "test_support.hpp"

namespace nslp {
namespace {

struct GridResult
{
    double best_value = -INFINITY;
    double nearest = INFINITY;
};

// Dense grid scan over [lo, hi]^2; independent of vertex enumeration.
// Only an upper bound on distances: slivers thinner than h are missed.
GridResult grid_scan(const LpInstance& inst, const Point& x, double lo, double hi, double h)
{
    GridResult out;
    const int steps = static_cast<int>(std::round((hi - lo) / h));
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            const Point p{lo + i * h, lo + j * h};
            if (!is_feasible(inst, p, 0.0))
                continue;
            out.best_value = std::max(out.best_value, inst.objective(p));
            out.nearest = std::min(out.nearest, vec::distance(p, x));
        }
    return out;
}

// Upper end of a square grid covering the (non-negative) polygon.
double grid_extent(const LpInstance& inst)
{
    double hi = 0.0;
    for (const auto& v : oracle::enumerate_vertices(inst))
        hi = std::max({hi, v[0], v[1]});
    return std::ceil(hi) + 0.5;
}

// Optimality certificate for a planar projection: x - p = sum mu_i a_i over
// rows active at p, mu >= 0.
bool in_normal_cone(const LpInstance& inst, const Point& p, const Point& g)
{
    if (vec::norm(g) == 0.0)
        return true;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < inst.m(); ++i)
        if (std::abs(vec::dot(inst.A().row(i), p) - inst.b()[i]) <= 1e-9)
            active.push_back(i);
    const double tol = 1e-9 * vec::norm(g);
    for (std::size_t i : active) {
        const auto a = inst.A().row(i);
        if (std::abs(a[0] * g[1] - a[1] * g[0]) <= tol && vec::dot(a, g) > 0.0)
            return true;
    }
    for (std::size_t u = 0; u < active.size(); ++u)
        for (std::size_t v = u + 1; v < active.size(); ++v) {
            const auto a = inst.A().row(active[u]);
            const auto b = inst.A().row(active[v]);
            const double det = a[0] * b[1] - a[1] * b[0];
            if (std::abs(det) < 1e-12)
                continue;
            const double mu = (g[0] * b[1] - g[1] * b[0]) / det;
            const double nu = (a[0] * g[1] - a[1] * g[0]) / det;
            if (mu >= -1e-9 && nu >= -1e-9)
                return true;
        }
    return false;
}

TEST(ExactLpSolve, BoxAndSimplex)
{
    const auto box = oracle::exact_lp_solve(testing::unit_box());
    ASSERT_TRUE(box.feasible);
    EXPECT_TRUE(box.bounded);
    EXPECT_NEAR(box.optimum[0], 1.0, 1e-12);
    EXPECT_NEAR(box.optimum[1], 1.0, 1e-12);
    EXPECT_NEAR(box.value, 2.0, 1e-12);

    const auto simplex = oracle::exact_lp_solve(testing::simplex2d({2.0, 1.0}));
    ASSERT_TRUE(simplex.feasible);
    EXPECT_NEAR(simplex.optimum[0], 1.0, 1e-12);
    EXPECT_NEAR(simplex.optimum[1], 0.0, 1e-12);
    EXPECT_NEAR(simplex.value, 2.0, 1e-12);
    EXPECT_EQ(simplex.vertices_checked, 3); // C(3, 2) row pairs
    EXPECT_EQ(oracle::enumerate_vertices(testing::simplex2d()).size(), 3u);
}

TEST(ExactLpSolve, EmptyUnboundedUnsupported)
{
    const LpInstance empty(DenseMatrix::from_rows({{1, 0}}), {-1}, {1, 1});
    EXPECT_FALSE(oracle::exact_lp_solve(empty).feasible);

    const LpInstance open(DenseMatrix::from_rows({{1, -1}}), {1}, {1, 1});
    const auto sol = oracle::exact_lp_solve(open);
    EXPECT_TRUE(sol.feasible);
    EXPECT_FALSE(sol.bounded);

    // unbounded region, bounded objective
    const LpInstance wedge(DenseMatrix::from_rows({{1, -1}}), {1}, {-1, -1});
    const auto min_sol = oracle::exact_lp_solve(wedge);
    EXPECT_TRUE(min_sol.bounded);
    EXPECT_NEAR(min_sol.value, 0.0, 1e-12);

    const LpInstance four(DenseMatrix(1, 4, 1.0), {1}, {1, 1, 1, 1});
    EXPECT_THROW(oracle::exact_lp_solve(four), UnsupportedError);
}

TEST(ExactLpSolve, ThreeDimensionalCube)
{
    const auto cube = testing::box({0, 0, 0}, {1, 2, 3});
    const auto sol = oracle::exact_lp_solve(LpInstance(cube.A(), cube.b(), {1, -1, 2}, true));
    EXPECT_NEAR(sol.value, 1 + 0 + 6, 1e-12);
    EXPECT_EQ(oracle::enumerate_vertices(cube).size(), 8u);
}

TEST(ExactLpSolve, DegenerateVertexIsDeduplicated)
{
    // three lines through (1, 1)
    const LpInstance inst(DenseMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}}), {1, 1, 2}, {1, 1});
    const auto vertices = oracle::enumerate_vertices(inst);
    EXPECT_EQ(vertices.size(), 4u);
}

TEST(ExactLpSolve, AgreesWithGridScan)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = random_feasible_instance(2, 6, seed).instance;
        const auto sol = oracle::exact_lp_solve(inst);
        ASSERT_TRUE(sol.feasible && sol.bounded);
        EXPECT_TRUE(is_feasible(inst, sol.optimum, 1e-9));
        const double h = 0.01;
        const auto scan = grid_scan(inst, Point{0, 0}, 0.0, grid_extent(inst), h);
        EXPECT_LE(scan.best_value, sol.value + 1e-12);
        EXPECT_GE(scan.best_value, sol.value - vec::norm(inst.c()) * h * std::sqrt(2.0));
    }
}

TEST(ExactDistance, BoxExamples)
{
    const auto box = testing::unit_box();
    EXPECT_DOUBLE_EQ(oracle::exact_distance(box, Point{2.0, 0.5}), 1.0);
    EXPECT_DOUBLE_EQ(oracle::exact_distance(box, Point{2.0, 2.0}), std::sqrt(2.0));
    EXPECT_EQ(oracle::exact_distance(box, Point{0.2, 0.7}), 0.0);
    EXPECT_DOUBLE_EQ(oracle::exact_distance(box, Point{-3.0, 0.5}), 3.0);

    const auto box4 = testing::box({0, 0, 0, 0}, {1, 1, 1, 1});
    EXPECT_DOUBLE_EQ(oracle::exact_distance(box4, Point{2, 0.5, 0.5, -1}), std::sqrt(2.0));
}

TEST(ExactDistance, UnsupportedAndEmpty)
{
    const auto gen3 = random_feasible_instance(3, 5, 1).instance;
    EXPECT_THROW(oracle::exact_distance(gen3, Point{5, 5, 5}), UnsupportedError);
    EXPECT_FALSE(oracle::supports_exact_distance(gen3));

    const LpInstance empty(DenseMatrix::from_rows({{1, 0}}), {-1}, {1, 1});
    EXPECT_THROW(oracle::exact_distance(empty, Point{0.5, 0.5}), EmptyRegionError);
    const LpInstance empty_poly(DenseMatrix::from_rows({{1, 1}}), {-1}, {1, 1});
    EXPECT_THROW(oracle::exact_distance(empty_poly, Point{0.5, 0.5}), EmptyRegionError);
}

TEST(ExactDistance, PolygonAgreesWithGridScan)
{
    std::mt19937_64 rng(17);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto inst = random_feasible_instance(2, 6, seed).instance;
        for (int trial = 0; trial < 2; ++trial) {
            const Point x = testing::random_point(rng, 2, -1, 5);
            const double exact = oracle::exact_distance(inst, x);
            const double h = 0.005;
            const auto scan = grid_scan(inst, x, 0.0, grid_extent(inst), h);
            EXPECT_LE(exact, scan.nearest + 1e-12);
            const Point p = oracle::exact_projection(inst, x);
            EXPECT_TRUE(is_feasible(inst, p, 1e-9));
            EXPECT_NEAR(vec::distance(p, x), exact, 1e-12);
            EXPECT_TRUE(in_normal_cone(inst, p, vec::sub(x, p)));
        }
    }
}

TEST(ExactDistance, ZeroExactlyOnFeasiblePoints)
{
    std::mt19937_64 rng(3);
    const auto inst = random_feasible_instance(2, 7, 9).instance;
    for (int trial = 0; trial < 3000; ++trial) {
        const Point x = testing::random_point(rng, 2, -0.5, 4);
        const double dist = oracle::exact_distance(inst, x);
        if (is_feasible(inst, x, 0.0))
            EXPECT_EQ(dist, 0.0);
        else
            EXPECT_GT(dist, 0.0);
    }
}

TEST(ExactDistance, TranslationConsistency)
{
    std::mt19937_64 rng(4);
    const auto scn = Scenario::make_translation(random_feasible_instance(2, 6, 21).instance, {0.01, -0.004});
    const std::int64_t L = 7;
    for (std::int64_t k = 0; k < 12; ++k) {
        const Point x = testing::random_point(rng, 2, -1, 5);
        const double t = static_cast<double>(k * L);
        const double moved = oracle::exact_distance(scn.instance_at(t), x);
        const double base = oracle::exact_distance(scn.base(), vec::sub(x, vec::scaled(scn.d(), t)));
        EXPECT_NEAR(moved, base, 1e-12);
    }
}

} // namespace
} // namespace nslp
