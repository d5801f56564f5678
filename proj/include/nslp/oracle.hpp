#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nslp/lp_core.hpp"

namespace nslp::oracle {

/**
 * Brute-force references for small instances. Nothing on the solver path
 * depends on these except the exact distance estimator in the Quest phase,
 * which is used only where supports_exact_distance() holds.
 *
 * Sign constraints are always included: non-augmented instances are
 * augmented internally.
 */

struct VertexSolution
{
    Point optimum;
    double value = 0.0;
    std::int64_t vertices_checked = 0; ///< n-subsets of rows examined
    bool feasible = false;
    bool bounded = true;               ///< false when <c, x> is unbounded above on the region
};

/** All distinct vertices (deduplicated within 1e-9), in enumeration order. Requires n <= 3. */
std::vector<Point> enumerate_vertices(const LpInstance& inst);

/**
 * Maximizes <c, x> by enumerating every n-subset of rows. Requires n <= 3
 * (UnsupportedError otherwise).
 */
VertexSolution exact_lp_solve(const LpInstance& inst);

/** Every row has exactly one nonzero coefficient. */
bool is_axis_aligned_box(const LpInstance& inst);

bool supports_exact_distance(const LpInstance& inst);

/**
 * Euclidean distance from x to the feasible region: clamp for axis-aligned
 * boxes in any dimension, edge/vertex candidates for polygons in the plane.
 * Returns exactly 0 for points satisfying every constraint.
 */
double exact_distance(const LpInstance& inst, std::span<const double> x);

/** Nearest feasible point (same geometry support as exact_distance). */
Point exact_projection(const LpInstance& inst, std::span<const double> x);

} // namespace nslp::oracle
