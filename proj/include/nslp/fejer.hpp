#pragma once

#include <cstdint>
#include <span>

#include "nslp/lp_core.hpp"

namespace nslp {

struct FejerParams
{
    double lambda = 1.5;               ///< relaxation factor, strictly inside (0, 2)
    std::int64_t max_iters = 1'000'000;
    double conv_tol = 1e-10;           ///< stop once ||phi(x) - x|| <= conv_tol

    void validate() const;
};

struct ProjectionResult
{
    Point point;
    std::int64_t iterations_used = 0;
    bool converged = false;
    double final_step_norm = 0.0;
};

/** Throws ParameterError unless 0 < lambda < 2. */
void require_relaxation(double lambda);

/**
 * Writes sum_i residual_i(x) / ||a_i||^2 * a_i into out, summed in ascending
 * row order. Returns true if any row was violated.
 */
bool accumulate_corrections(const LpInstance& inst, std::span<const double> x, std::span<double> out);

/**
 * One application of the relaxed averaged-projection map
 *   phi(x) = x - (lambda / m) * sum_i max{<a_i, x> - b_i, 0} / ||a_i||^2 * a_i.
 * Points satisfying every row are returned unchanged.
 */
Point fejer_map(const LpInstance& inst, double lambda, std::span<const double> x);

/** phi applied s times; s = 0 returns x. */
Point fejer_iterate(const LpInstance& inst, double lambda, std::span<const double> x, std::int64_t s);

/**
 * Iterates phi until the step norm drops to params.conv_tol or the budget runs out.
 * An exhausted budget is reported through converged = false; a non-finite
 * iterate throws NumericalError.
 */
ProjectionResult pseudo_projection(const LpInstance& inst, const FejerParams& params, std::span<const double> x);

} // namespace nslp
