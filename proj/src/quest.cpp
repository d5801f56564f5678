#include "nslp/quest.hpp"

#include <algorithm>
#include <cmath>

#include "nslp/errors.hpp"
#include "nslp/oracle.hpp"

namespace nslp {

std::string to_string(DistanceMethod method)
{
    return method == DistanceMethod::Exact ? "exact" : "surrogate";
}

void QuestConfig::validate() const
{
    if (L < 1)
        throw ParameterError("QuestConfig: L must be >= 1");
    require_relaxation(lambda);
    if (!(epsilon > 0.0))
        throw ParameterError("QuestConfig: epsilon must be positive");
    if (max_updates < 0)
        throw ParameterError("QuestConfig: max_updates must be non-negative");
    if (!(feas_tol > 0.0))
        throw ParameterError("QuestConfig: feas_tol must be positive");
    probe.validate();
}

namespace {

double normalized_max_violation(const LpInstance& inst, std::span<const double> z)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < inst.m(); ++i)
        worst = std::max(worst, residual(inst, i, z) / std::sqrt(inst.row_norm_sq(i)));
    if (!inst.nonneg_augmented())
        for (double v : z)
            worst = std::max(worst, -v);
    return worst;
}

std::optional<double> exact_if_supported(const LpInstance& inst, std::span<const double> z)
{
    if (!oracle::supports_exact_distance(inst))
        return std::nullopt;
    return oracle::exact_distance(inst, z);
}

} // namespace

DistanceEstimate estimate_distance(const LpInstance& inst, std::span<const double> z, const QuestConfig& cfg)
{
    const bool exact = cfg.estimator == DistanceEstimator::Exact ||
                       (cfg.estimator == DistanceEstimator::Auto && oracle::supports_exact_distance(inst));
    if (exact)
        return {oracle::exact_distance(inst, z), DistanceMethod::Exact};

    const double violation = normalized_max_violation(inst, z);
    if (violation == 0.0)
        return {0.0, DistanceMethod::Surrogate};
    const ProjectionResult probe = pseudo_projection(inst, cfg.probe, z);
    return {std::max(violation, vec::distance(probe.point, z)), DistanceMethod::Surrogate};
}

std::vector<double> QuestResult::distances() const
{
    std::vector<double> out;
    out.reserve(epochs.size());
    for (const auto& e : epochs)
        out.push_back(e.dist_est);
    return out;
}

QuestResult quest_run(const Scenario& scn, std::span<const double> z0, const QuestConfig& cfg, std::int64_t k_start)
{
    cfg.validate();
    if (z0.size() != scn.n())
        throw ContractViolation("quest_run: starting point has length " + std::to_string(z0.size()) +
                                ", scenario dimension is " + std::to_string(scn.n()));
    if (std::any_of(z0.begin(), z0.end(), [](double v) { return !(v >= 0.0); }))
        throw ContractViolation("quest_run: starting point must have non-negative coordinates");
    if (k_start < 0)
        throw ContractViolation("quest_run: k_start must be non-negative");

    QuestResult result;
    result.z.assign(z0.begin(), z0.end());
    result.k = k_start;

    auto time_of = [&](std::int64_t k) { return static_cast<double>(k) * static_cast<double>(cfg.L); };
    LpInstance current = scn.instance_at(time_of(k_start));

    auto record = [&](const LpInstance& inst) {
        const DistanceEstimate est = estimate_distance(inst, result.z, cfg);
        result.method = est.method;
        QuestEpoch epoch{result.k, result.z, est.value, std::nullopt, inst.objective(result.z)};
        epoch.dist_exact = est.method == DistanceMethod::Exact ? std::optional<double>(est.value)
                                                               : exact_if_supported(inst, result.z);
        result.epochs.push_back(std::move(epoch));
        return est.value < cfg.epsilon;
    };

    if (record(current)) {
        result.terminated = true;
        return result;
    }
    for (std::int64_t step = 0; step < cfg.max_updates; ++step) {
        result.z = fejer_iterate(current, cfg.lambda, result.z, cfg.L);
        if (!vec::all_finite(result.z))
            throw NumericalError("quest_run: non-finite iterate at update " + std::to_string(result.k + 1));
        ++result.k;
        current = scn.instance_at(time_of(result.k));
        if (record(current)) {
            result.terminated = true;
            break;
        }
    }
    return result;
}

Point psi_map(const Scenario& scn, std::int64_t L, double lambda, std::span<const double> x, double feas_tol)
{
    if (scn.kind() != ScenarioKind::Translation)
        throw ContractViolation("psi_map: scenario is not a translation");
    if (L < 1)
        throw ContractViolation("psi_map: L must be >= 1");
    require_relaxation(lambda);
    if (is_feasible(scn.base(), x, feas_tol))
        return Point(x.begin(), x.end());
    const Point advanced = fejer_iterate(scn.base(), lambda, x, L);
    return vec::sub(advanced, vec::scaled(scn.d(), static_cast<double>(L)));
}

double lemma1_check(const Scenario& scn, std::span<const double> u, std::int64_t p, std::int64_t l, std::int64_t L,
                    double lambda)
{
    if (scn.kind() != ScenarioKind::Translation)
        throw ContractViolation("lemma1_check: scenario is not a translation");
    if (p < 0 || l < 1 || L < 1)
        throw ContractViolation("lemma1_check: need p >= 0, l >= 1, L >= 1");

    const Point shift = vec::scaled(scn.d(), static_cast<double>(p) * static_cast<double>(L));
    Point v = vec::add(u, shift);
    for (std::int64_t it = 0; it < l; ++it)
        v = fejer_map_translated(scn, p, L, lambda, v);
    const Point w = fejer_iterate(scn.base(), lambda, u, l);
    return vec::norm(vec::sub(vec::sub(v, w), shift));
}

bool ConditionMargins::all_positive() const
{
    bool any = false;
    for (const auto& m : margins) {
        if (!m)
            continue;
        any = true;
        if (!(*m > 0.0))
            return false;
    }
    return any;
}

ConditionMargins tracking_condition_estimate(const Scenario& scn, std::int64_t L, double lambda,
                                             std::span<const Point> samples)
{
    if (scn.kind() != ScenarioKind::Translation)
        throw ContractViolation("tracking_condition_estimate: scenario is not a translation");
    require_relaxation(lambda);
    const LpInstance& base = scn.base();
    const double drift = vec::norm(scn.d()) * static_cast<double>(L);

    ConditionMargins out;
    out.margins.reserve(samples.size());
    for (const auto& x : samples) {
        const double before = oracle::exact_distance(base, x);
        if (before == 0.0) {
            out.margins.emplace_back(std::nullopt);
            ++out.skipped;
            continue;
        }
        const double after = oracle::exact_distance(base, fejer_iterate(base, lambda, x, L));
        out.margins.emplace_back(before - after - drift);
    }
    return out;
}

std::vector<IdentityGap> parallelogram_identity_check(const Scenario& scn, std::span<const double> z0,
                                                      const QuestConfig& cfg, std::int64_t k_max)
{
    if (scn.kind() != ScenarioKind::Translation)
        throw ContractViolation("parallelogram_identity_check: scenario is not a translation");
    cfg.validate();
    if (k_max < 0)
        throw ContractViolation("parallelogram_identity_check: k_max must be non-negative");

    const LpInstance& base = scn.base();
    Point z(z0.begin(), z0.end());
    Point y = z;
    std::vector<IdentityGap> gaps;
    for (std::int64_t k = 0; k <= k_max; ++k) {
        const double t = static_cast<double>(k) * static_cast<double>(cfg.L);
        if (k > 0) {
            const LpInstance prev = scn.instance_at(static_cast<double>(k - 1) * static_cast<double>(cfg.L));
            z = fejer_iterate(prev, cfg.lambda, z, cfg.L);
            y = psi_map(scn, cfg.L, cfg.lambda, y, cfg.feas_tol);
        }
        const Point shift = vec::scaled(scn.d(), t);
        const double shift_gap = vec::norm(vec::sub(vec::sub(z, y), shift));
        const double dist_gap =
            std::abs(oracle::exact_distance(scn.instance_at(t), z) - oracle::exact_distance(base, y));
        gaps.push_back({k, shift_gap, dist_gap});
    }
    return gaps;
}

} // namespace nslp
