#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nslp/lp_core.hpp"

namespace nslp {

enum class ScenarioKind { Static, Translation, Piecewise };

std::string to_string(ScenarioKind kind);

struct ScheduleEntry
{
    double threshold; ///< instance applies for t >= threshold (until the next entry)
    LpInstance instance;
};

/**
 * Time-indexed provider t -> LpInstance.
 *
 * Translation scenarios move the polytope rigidly by d per unit time, i.e.
 * b_t = b + A (t d) with A and c fixed. Piecewise scenarios swap whole
 * instances at given thresholds and carry no convergence guarantee.
 *
 * By default every instance is nonnegativity-augmented so that the Fejer map
 * is attracted to the full feasible set, sign constraints included. Under a
 * translation the augmented sign rows move with the polytope.
 */
class Scenario
{
public:
    static Scenario make_static(LpInstance base, bool augment = true);
    static Scenario make_translation(LpInstance base, std::vector<double> d, bool augment = true);
    static Scenario make_piecewise(LpInstance base, std::vector<ScheduleEntry> schedule, bool augment = true);

    ScenarioKind kind() const noexcept { return kind_; }
    const LpInstance& base() const noexcept { return base_; }
    const std::vector<double>& d() const noexcept { return d_; }
    const std::vector<ScheduleEntry>& schedule() const noexcept { return schedule_; }
    std::size_t n() const noexcept { return base_.n(); }

    /** Throws ContractViolation for t < 0. */
    LpInstance instance_at(double t) const;

private:
    Scenario(ScenarioKind kind, LpInstance base, std::vector<double> d, std::vector<ScheduleEntry> schedule);

    ScenarioKind kind_;
    LpInstance base_;
    std::vector<double> d_;
    std::vector<ScheduleEntry> schedule_;
};

/**
 * Fejer map of a translation scenario at update index k, evaluated in the
 * shifted-argument form
 *   phi_k(x) = x - (lambda/m) sum_i max{<a_i, x - kLd> - b_i, 0} / ||a_i||^2 a_i
 * against the base instance.
 */
Point fejer_map_translated(const Scenario& scn, std::int64_t k, std::int64_t L, double lambda,
                           std::span<const double> x);

struct GeneratedInstance
{
    LpInstance instance;
    Point interior_point;
    double margin; ///< smallest slack of interior_point over all constraints, sign constraints included
};

/**
 * Random instance with a bounded, nonempty feasible region in the positive
 * orthant. Row 0 has strictly positive coefficients, which bounds the region
 * together with x >= 0. Deterministic in seed on every platform.
 */
GeneratedInstance random_feasible_instance(std::size_t n, std::size_t m, std::uint64_t seed, bool augment = true);

/** Parsed scenario document, plus the optional run hints it may carry. */
struct ScenarioDocument
{
    Scenario scenario;
    std::optional<std::int64_t> L;
    std::optional<double> s;  ///< cross spacing
    std::optional<Point> z0;
};

/**
 * Scenario JSON:
 *   {"kind": "static" | "translation" | "piecewise",
 *    "base": <instance> | {"generate": {"n": .., "m": ..}},
 *    "d": [...], "L": 10, "schedule": [{"t": .., "instance": <instance>}, ...],
 *    "augment_nonnegativity": true, "s": 0.01, "z0": [...]}
 * "generate" draws the base from random_feasible_instance with the given seed.
 */
ScenarioDocument scenario_from_json(const nlohmann::json& doc, std::uint64_t seed = 0);

} // namespace nslp
