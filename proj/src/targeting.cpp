#include "nslp/targeting.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>

#include "nslp/errors.hpp"

namespace nslp {

namespace {

int sgn(int v) { return (v > 0) - (v < 0); }

void require_cohort_size(int K)
{
    if (K < 2 || K % 2 != 0)
        throw ContractViolation("cross: K must be even and >= 2, got " + std::to_string(K));
}

void require_2d_marker(int K, Marker m)
{
    if (m.chi < 0 || m.chi > 1 || std::abs(m.eta) > K / 2)
        throw ContractViolation("marker (" + std::to_string(m.chi) + ", " + std::to_string(m.eta) +
                                ") is outside the planar cross with K = " + std::to_string(K));
}

} // namespace

Marker alpha_to_marker_2d(int K, int alpha)
{
    require_cohort_size(K);
    if (alpha < 0 || alpha > 2 * K)
        throw ContractViolation("alpha_to_marker_2d: alpha = " + std::to_string(alpha) + " outside [0, " +
                                std::to_string(2 * K) + "]");
    const int half = K / 2;
    const int off = alpha - K;
    const int chi = std::abs(std::abs(off) - 1) / half;
    const int eta = sgn(off) * (((std::abs(off) - 1) % half) + 1);
    return {chi, eta};
}

int marker_to_alpha_2d(int K, Marker m)
{
    require_cohort_size(K);
    require_2d_marker(K, m);
    return m.eta + sgn(m.eta) * m.chi * K / 2 + K;
}

SequentialNumbering::SequentialNumbering(int n, int K) : n_(n), K_(K)
{
    if (n < 2)
        throw ContractViolation("cross: dimension must be >= 2, got " + std::to_string(n));
    require_cohort_size(K);
}

Marker SequentialNumbering::to_marker(int alpha) const
{
    if (alpha < 0 || alpha >= size())
        throw ContractViolation("sequential number " + std::to_string(alpha) + " outside [0, " +
                                std::to_string(size() - 1) + "]");
    if (alpha <= 2 * K_)
        return alpha_to_marker_2d(K_, alpha);
    const int half = K_ / 2;
    const int r = alpha - 2 * K_ - 1;
    const int pos = r % K_;
    return {2 + r / K_, pos < half ? pos - half : pos - half + 1};
}

int SequentialNumbering::to_alpha(Marker m) const
{
    const int half = K_ / 2;
    if (m.chi < 0 || m.chi >= n_ || std::abs(m.eta) > half)
        throw ContractViolation("marker (" + std::to_string(m.chi) + ", " + std::to_string(m.eta) +
                                ") outside the cross");
    if (m.is_center())
        return K_;
    if (m.chi < 2)
        return marker_to_alpha_2d(K_, m);
    const int pos = m.eta < 0 ? m.eta + half : m.eta + half - 1;
    return 2 * K_ + 1 + (m.chi - 2) * K_ + pos;
}

int default_cohort_size(std::size_t n)
{
    const int half_up = static_cast<int>((n + 1) / 2);
    return std::min(8, 2 * half_up * 2);
}

Cross::Cross(Point g0, int K, double s)
    : g0_(std::move(g0)), s_(s), numbering_(static_cast<int>(g0_.size()), K)
{
    if (!(s > 0.0))
        throw ContractViolation("cross: spacing s must be positive");
    if (!vec::all_finite(g0_))
        throw ContractViolation("cross: center has non-finite coordinates");
}

Point Cross::point(int alpha) const { return marker_to_point(*this, numbering_.to_marker(alpha)); }

Point marker_to_point(const Cross& cross, Marker m)
{
    if (m.chi < 0 || static_cast<std::size_t>(m.chi) >= cross.n() || std::abs(m.eta) > cross.K() / 2)
        throw ContractViolation("marker (" + std::to_string(m.chi) + ", " + std::to_string(m.eta) +
                                ") outside the cross");
    Point p = cross.g0();
    p[static_cast<std::size_t>(m.chi)] += m.eta * cross.s();
    return p;
}

namespace {

// Contiguous static partition of [0, count) over `workers` threads.
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn)
{
    workers = std::clamp(workers, 1, std::max(count, 1));
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(count, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i)
                fn(i);
        });
    }
}

} // namespace

std::vector<bool> evaluate_membership(const Cross& cross, const LpInstance& inst, double feas_tol, int workers)
{
    if (cross.n() != inst.n())
        throw ContractViolation("evaluate_membership: cross dimension " + std::to_string(cross.n()) +
                                " differs from instance dimension " + std::to_string(inst.n()));
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(cross.point_count()), 0);
    parallel_for(cross.point_count(), workers, [&](int alpha) {
        flags[static_cast<std::size_t>(alpha)] = is_feasible(inst, cross.point(alpha), feas_tol) ? 1 : 0;
    });
    return std::vector<bool>(flags.begin(), flags.end());
}

std::string to_string(TargetingEvent event)
{
    switch (event) {
    case TargetingEvent::Step: return "target";
    case TargetingEvent::Lost: return "lost";
    case TargetingEvent::Reacquire: return "reacquire";
    }
    return "unknown";
}

void TargetingParams::validate() const
{
    if (K < 2 || K % 2 != 0)
        throw ParameterError("TargetingParams: K must be even and >= 2");
    if (!(s > 0.0))
        throw ParameterError("TargetingParams: s must be positive");
    if (!(feas_tol > 0.0))
        throw ParameterError("TargetingParams: feas_tol must be positive");
    if (workers < 1)
        throw ParameterError("TargetingParams: workers must be >= 1");
}

TargetingState targeting_step(const TargetingState& state, const LpInstance& inst_k, double feas_tol, int workers)
{
    const Cross& cross = state.cross;
    const auto members = evaluate_membership(cross, inst_k, feas_tol, workers);
    const auto& numbering = cross.numbering();
    const int n = static_cast<int>(cross.n());

    // Per-cohort winners; ascending alpha with strict comparison keeps the lowest number on ties.
    std::vector<std::optional<int>> best(static_cast<std::size_t>(n));
    std::vector<double> best_value(static_cast<std::size_t>(n), 0.0);
    int feasible_count = 0;
    for (int alpha = 0; alpha < cross.point_count(); ++alpha) {
        if (!members[static_cast<std::size_t>(alpha)])
            continue;
        ++feasible_count;
        const Marker m = numbering.to_marker(alpha);
        if (m.is_center())
            continue;
        const double value = inst_k.objective(cross.point(alpha));
        auto& slot = best[static_cast<std::size_t>(m.chi)];
        if (!slot || value > best_value[static_cast<std::size_t>(m.chi)]) {
            slot = alpha;
            best_value[static_cast<std::size_t>(m.chi)] = value;
        }
    }

    std::vector<Point> Q;
    std::optional<double> q_max;
    for (int chi = 0; chi < n; ++chi) {
        const auto& slot = best[static_cast<std::size_t>(chi)];
        if (!slot)
            continue;
        Q.push_back(cross.point(*slot));
        const double v = best_value[static_cast<std::size_t>(chi)];
        q_max = q_max ? std::max(*q_max, v) : v;
    }

    const bool center_feasible = members[static_cast<std::size_t>(numbering.center())];
    if (Q.empty() && !center_feasible)
        throw LostPolytope("targeting: no cross point lies in the polytope at k = " + std::to_string(state.k));

    TargetingState next{cross, state.k + 1, Q, state.trace};
    const bool keep = center_feasible && (!q_max || inst_k.objective(cross.g0()) >= *q_max);
    if (!keep) {
        Point mean(cross.n(), 0.0);
        for (const auto& q : Q)
            for (std::size_t j = 0; j < mean.size(); ++j)
                mean[j] += q[j];
        for (auto& v : mean)
            v /= static_cast<double>(Q.size());
        next.cross = cross.recentered(std::move(mean));
    }
    next.trace.push_back({state.k, TargetingEvent::Step, next.cross.g0(), inst_k.objective(next.cross.g0()),
                          feasible_count, !keep, std::nullopt});
    return next;
}

TargetingState targeting_run(const Scenario& scn, const QuestResult& start, const TargetingParams& params,
                             std::int64_t steps, const QuestConfig& quest_cfg)
{
    params.validate();
    quest_cfg.validate();
    if (!start.terminated)
        throw ContractViolation("targeting_run: the Quest phase did not terminate");
    if (steps < 0)
        throw ContractViolation("targeting_run: steps must be non-negative");

    auto time_of = [&](std::int64_t k) { return static_cast<double>(k) * static_cast<double>(quest_cfg.L); };

    // A center merely within epsilon can sit outside a vertex where no axis
    // move reaches M_k; re-acquisition therefore runs until it is inside.
    QuestConfig reacquire_cfg = quest_cfg;
    reacquire_cfg.epsilon = params.feas_tol;

    TargetingState state{Cross(start.z, params.K, params.s), start.k, {}, {}};
    for (std::int64_t step = 0; step < steps; ++step) {
        const LpInstance inst = scn.instance_at(time_of(state.k));
        try {
            state = targeting_step(state, inst, params.feas_tol, params.workers);
        } catch (const LostPolytope&) {
            const Point& g0 = state.cross.g0();
            state.trace.push_back({state.k, TargetingEvent::Lost, g0, inst.objective(g0), 0, false, std::nullopt});

            Point restart = g0;
            for (auto& v : restart)
                v = std::max(v, 0.0);
            const QuestResult again = quest_run(scn, restart, reacquire_cfg, state.k + 1);
            for (const auto& e : again.epochs)
                state.trace.push_back({e.k, TargetingEvent::Reacquire, e.z, e.objective, 0, false, e.dist_est});
            if (!again.terminated) {
                state.k = again.k + 1;
                state.reacquisition_failed = true;
                return state;
            }
            state.cross = state.cross.recentered(again.z);
            state.last_Q.clear();
            state.k = again.k + 1;
        }
    }
    return state;
}

} // namespace nslp
