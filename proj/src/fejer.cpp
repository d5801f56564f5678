#include "nslp/fejer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nslp/errors.hpp"

namespace nslp {

void require_relaxation(double lambda)
{
    if (!(lambda > 0.0 && lambda < 2.0))
        throw ParameterError("relaxation factor lambda must lie in (0, 2), got " + std::to_string(lambda));
}

void FejerParams::validate() const
{
    require_relaxation(lambda);
    if (max_iters < 1)
        throw ParameterError("FejerParams: max_iters must be positive");
    if (!(conv_tol > 0.0))
        throw ParameterError("FejerParams: conv_tol must be positive");
}

bool accumulate_corrections(const LpInstance& inst, std::span<const double> x, std::span<double> out)
{
    if (x.size() != inst.n() || out.size() != inst.n())
        throw ContractViolation("fejer map: point has length " + std::to_string(x.size()) +
                                ", instance dimension is " + std::to_string(inst.n()));
    std::fill(out.begin(), out.end(), 0.0);
    bool violated = false;
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const auto a = inst.row(i);
        const double excess = vec::dot(a, x) - inst.b()[i];
        if (excess > 0.0) {
            violated = true;
            const double w = excess / inst.row_norm_sq(i);
            for (std::size_t j = 0; j < out.size(); ++j)
                out[j] += w * a[j];
        }
    }
    return violated;
}

namespace {

// x <- x - factor * corr in place; returns the step norm.
double apply_step(Point& x, std::span<const double> corr, double factor)
{
    double step_sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double delta = factor * corr[j];
        x[j] -= delta;
        step_sq += delta * delta;
    }
    return std::sqrt(step_sq);
}

} // namespace

Point fejer_map(const LpInstance& inst, double lambda, std::span<const double> x)
{
    require_relaxation(lambda);
    Point out(x.begin(), x.end());
    Point corr(inst.n());
    if (accumulate_corrections(inst, x, corr))
        apply_step(out, corr, lambda / static_cast<double>(inst.m()));
    return out;
}

Point fejer_iterate(const LpInstance& inst, double lambda, std::span<const double> x, std::int64_t s)
{
    require_relaxation(lambda);
    if (s < 0)
        throw ContractViolation("fejer_iterate: iteration count must be non-negative");
    Point cur(x.begin(), x.end());
    if (cur.size() != inst.n())
        throw ContractViolation("fejer_iterate: dimension mismatch");
    Point corr(inst.n());
    const double factor = lambda / static_cast<double>(inst.m());
    for (std::int64_t it = 0; it < s; ++it) {
        if (!accumulate_corrections(inst, cur, corr))
            break; // fixed point; further applications are the identity
        apply_step(cur, corr, factor);
    }
    return cur;
}

ProjectionResult pseudo_projection(const LpInstance& inst, const FejerParams& params, std::span<const double> x)
{
    params.validate();
    ProjectionResult result;
    result.point.assign(x.begin(), x.end());
    if (result.point.size() != inst.n())
        throw ContractViolation("pseudo_projection: dimension mismatch");
    if (!vec::all_finite(result.point))
        throw NumericalError("pseudo_projection: non-finite starting point");

    Point corr(inst.n());
    const double factor = params.lambda / static_cast<double>(inst.m());
    while (result.iterations_used < params.max_iters) {
        ++result.iterations_used;
        const double step = accumulate_corrections(inst, result.point, corr)
                                ? apply_step(result.point, corr, factor)
                                : 0.0;
        result.final_step_norm = step;
        if (!std::isfinite(step) || !vec::all_finite(result.point))
            throw NumericalError("pseudo_projection: non-finite iterate after " +
                                 std::to_string(result.iterations_used) + " iterations");
        if (step <= params.conv_tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace nslp
