#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nslp/fejer.hpp"
#include "nslp/lp_core.hpp"
#include "nslp/scenarios.hpp"

namespace nslp {

/**
 * How the Quest termination test measures dist(z_k, M_k).
 *
 * Exact uses the oracle (planar polygons, axis-aligned boxes). Surrogate uses
 * the largest normalized row violation, and when that is positive, the length
 * of a pseudo-projection probe from z_k on the frozen instance. Auto picks
 * Exact where the oracle supports the geometry.
 */
enum class DistanceEstimator { Auto, Exact, Surrogate };

enum class DistanceMethod { Exact, Surrogate };

std::string to_string(DistanceMethod method);

struct QuestConfig
{
    std::int64_t L = 10;             ///< Fejer steps between input-data updates
    double lambda = 1.5;
    double epsilon = 1e-3;
    std::int64_t max_updates = 10'000;
    double feas_tol = 1e-9;
    DistanceEstimator estimator = DistanceEstimator::Auto;
    FejerParams probe{1.5, 100'000, 1e-10};

    void validate() const;
};

struct DistanceEstimate
{
    double value = 0.0;
    DistanceMethod method = DistanceMethod::Exact;
};

DistanceEstimate estimate_distance(const LpInstance& inst, std::span<const double> z, const QuestConfig& cfg);

/** One row of the Quest trace: z_k measured against M_k. */
struct QuestEpoch
{
    std::int64_t k = 0;
    Point z;
    double dist_est = 0.0;
    std::optional<double> dist_exact; ///< present whenever the oracle supports the geometry
    double objective = 0.0;           ///< <c_k, z_k>
};

struct QuestResult
{
    Point z;
    std::int64_t k = 0;
    std::vector<QuestEpoch> epochs;
    bool terminated = false;
    DistanceMethod method = DistanceMethod::Exact;

    std::vector<double> distances() const;
};

/**
 * Fejer process with data refreshed every L iterations:
 *   z_k = phi_{k-1}^L(z_{k-1}),  phi_{k-1} built from instance_at((k-1) L),
 * stopping once the distance estimate of z_k to M_k = instance_at(k L) drops
 * below epsilon. The starting point is measured first (k = k_start), so a
 * point already within epsilon terminates without any Fejer step.
 *
 * Budget exhaustion is reported through terminated = false.
 */
QuestResult quest_run(const Scenario& scn, std::span<const double> z0, const QuestConfig& cfg,
                      std::int64_t k_start = 0);

/**
 * psi(x) = phi^L(x) - L d for x outside M, psi(x) = x inside
 * (membership tested at feas_tol on the base instance).
 */
Point psi_map(const Scenario& scn, std::int64_t L, double lambda, std::span<const double> x, double feas_tol);

/**
 * Shift-equivariance residual || phi_p^l(u + pLd) - phi^l(u) - pLd ||,
 * with phi_p in its shifted-argument form. Zero in exact arithmetic.
 */
double lemma1_check(const Scenario& scn, std::span<const double> u, std::int64_t p, std::int64_t l, std::int64_t L,
                    double lambda);

struct ConditionMargins
{
    /// dist(x, M) - dist(phi^L(x), M) - ||Ld|| per sample; empty for samples inside M
    std::vector<std::optional<double>> margins;
    std::size_t skipped = 0;

    bool all_positive() const;
};

/**
 * Sampled evidence for the tracking condition ||Ld|| < dist(x,M) - dist(phi^L(x),M).
 * Positive margins everywhere are evidence, not proof, that it holds.
 */
ConditionMargins tracking_condition_estimate(const Scenario& scn, std::int64_t L, double lambda,
                                             std::span<const Point> samples);

struct IdentityGap
{
    std::int64_t k = 0;
    double shift_gap = 0.0; ///< || z_k - y_k - kLd ||
    double dist_gap = 0.0;  ///< | dist(z_k, M_k) - dist(y_k, M) |
};

/**
 * Runs the moving-data iteration z_k and the stationary-frame iteration
 * y_k = psi(y_{k-1}) (y_0 = z_0) side by side for k = 0..k_max.
 */
std::vector<IdentityGap> parallelogram_identity_check(const Scenario& scn, std::span<const double> z0,
                                                      const QuestConfig& cfg, std::int64_t k_max);

} // namespace nslp
