#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nslp/lp_core.hpp"
#include "nslp/quest.hpp"
#include "nslp/scenarios.hpp"

namespace nslp {

/**
 * Cross point identifier: cohort (axis) chi and signed offset eta counted
 * from the center, 1 <= |eta| <= K/2. eta = 0 denotes the center whatever chi is.
 */
struct Marker
{
    int chi = 0;
    int eta = 0;

    bool is_center() const noexcept { return eta == 0; }
    bool operator==(const Marker&) const = default;
};

/**
 * Flat numbering alpha in [0, nK] of the nK + 1 cross points.
 *
 * Axes 0 and 1 follow the planar formulas (center at alpha = K); points of
 * axes chi >= 2 follow at 2K + 1, cohort-major, eta ascending.
 */
class SequentialNumbering
{
public:
    SequentialNumbering(int n, int K);

    int n() const noexcept { return n_; }
    int K() const noexcept { return K_; }
    int size() const noexcept { return n_ * K_ + 1; }
    int center() const noexcept { return K_; }

    Marker to_marker(int alpha) const;
    int to_alpha(Marker m) const;

private:
    int n_;
    int K_;
};

/** Planar alpha -> marker with integer division; valid for 0 <= alpha <= 2K. */
Marker alpha_to_marker_2d(int K, int alpha);

/** Planar marker -> alpha = eta + sgn(eta) * chi * K / 2 + K. */
int marker_to_alpha_2d(int K, Marker m);

/** Default cohort size: 2 * ceil(n/2) * 2, capped at 8. */
int default_cohort_size(std::size_t n);

/**
 * Axisymmetric cross: center g0 plus n cohorts of K points spaced s apart on
 * the axis-parallel lines through g0.
 */
class Cross
{
public:
    Cross(Point g0, int K, double s);

    const Point& g0() const noexcept { return g0_; }
    std::size_t n() const noexcept { return g0_.size(); }
    int K() const noexcept { return numbering_.K(); }
    double s() const noexcept { return s_; }
    const SequentialNumbering& numbering() const noexcept { return numbering_; }

    int point_count() const noexcept { return numbering_.size(); }
    Point point(int alpha) const;

    /** Same K and s, new center. */
    Cross recentered(Point g0) const { return Cross(std::move(g0), K(), s_); }

private:
    Point g0_;
    double s_;
    SequentialNumbering numbering_;
};

/** g0 + eta * s along axis chi. Throws ContractViolation for markers outside the cross. */
Point marker_to_point(const Cross& cross, Marker m);

/**
 * Membership of every cross point in the instance's feasible set at feas_tol,
 * indexed by sequential number. Evaluated on `workers` threads; the result
 * does not depend on the worker count.
 */
std::vector<bool> evaluate_membership(const Cross& cross, const LpInstance& inst, double feas_tol, int workers = 1);

enum class TargetingEvent { Step, Lost, Reacquire };

std::string to_string(TargetingEvent event);

struct TargetingRecord
{
    std::int64_t k = 0;
    TargetingEvent event = TargetingEvent::Step;
    Point g0;                        ///< center after the step (Reacquire: the Quest iterate)
    double objective = 0.0;          ///< <c_k, g0>
    int feasible_count = 0;          ///< |G'|
    bool moved = false;
    std::optional<double> dist_est;  ///< Reacquire rows only
};

struct TargetingState
{
    Cross cross;
    std::int64_t k = 0;
    std::vector<Point> last_Q;
    std::vector<TargetingRecord> trace;
    bool reacquisition_failed = false; ///< a lost polytope could not be re-acquired; the run stopped there
};

struct TargetingParams
{
    int K = 4;
    double s = 1e-3;
    double feas_tol = 1e-9;
    int workers = 1;

    void validate() const;
};

/**
 * One pass of the loop: G' = G n M_k, per-cohort argmax of <c_k, g> (ties to
 * the lowest sequential number), keep g0 if it is feasible and at least as
 * good as every cohort winner, else move g0 to the mean of the winners.
 * Throws LostPolytope when no cross point is feasible and g0 is not either.
 */
TargetingState targeting_step(const TargetingState& state, const LpInstance& inst_k, double feas_tol,
                              int workers = 1);

/**
 * Builds the cross at start.z (time index start.k) and performs `steps`
 * passes against instance_at(k L). A lost polytope is recorded, the Quest
 * phase is re-run from the clamped center with epsilon = feas_tol, and the
 * loop resumes around the re-acquired point. If that Quest run does not terminate, the run stops
 * with reacquisition_failed set and the partial trace kept.
 */
TargetingState targeting_run(const Scenario& scn, const QuestResult& start, const TargetingParams& params,
                             std::int64_t steps, const QuestConfig& quest_cfg);

} // namespace nslp
