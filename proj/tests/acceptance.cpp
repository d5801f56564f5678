// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nslp/cli.hpp"
#include "nslp/errors.hpp"
#include "nslp/fejer.hpp"
#include "nslp/oracle.hpp"
#include "nslp/quest.hpp"
#include "nslp/scenarios.hpp"
#include "nslp/targeting.hpp"
#include "test_support.hpp"

namespace {

using namespace nslp;

struct Verdict
{
    bool pass = true;
    std::string detail;
};

std::string data(const char* name) { return std::string(NSLP_DATA_DIR) + "/" + name; }

ScenarioDocument load(const char* name)
{
    std::ifstream in(data(name));
    return scenario_from_json(nlohmann::json::parse(in));
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// m cycles through 4..16; the generator needs m >= n, so n = 5 starts at 5.
std::size_t row_count(std::size_t n, int i)
{
    const std::size_t lo = std::max<std::size_t>(4, n);
    return lo + static_cast<std::size_t>(i) % (17 - lo);
}

// Uniform point of M near the interior point, by rejection.
Point sample_inside(std::mt19937_64& rng, const GeneratedInstance& gen)
{
    for (int attempt = 0; attempt < 200; ++attempt) {
        Point y = vec::add(gen.interior_point, testing::random_point(rng, gen.instance.n(), -1.0, 1.0));
        if (is_feasible(gen.instance, y, 0.0))
            return y;
    }
    return gen.interior_point;
}

Verdict fejer_property()
{
    std::mt19937_64 rng(1);
    const double lambdas[] = {0.5, 1.0, 1.5, 1.9};
    double worst = INFINITY;
    std::size_t pairs = 0, violations = 0, moved_interior = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = i % 2 == 0 ? 2 : 5;
        const std::size_t m = row_count(n, i);
        const auto gen = random_feasible_instance(n, m, 100 + static_cast<std::uint64_t>(i));
        for (double lambda : lambdas) {
            for (int t = 0; t < 20; ++t) {
                const Point y = sample_inside(rng, gen);
                moved_interior += fejer_map(gen.instance, lambda, y) != y;
            }
            for (int p = 0; p < 1000; ++p) {
                Point x;
                do
                    x = testing::random_point(rng, n, -2.0, 4.0);
                while (is_feasible(gen.instance, x, 0.0));
                const Point y = sample_inside(rng, gen);
                const double gain = vec::distance(x, y) - vec::distance(fejer_map(gen.instance, lambda, x), y);
                worst = std::min(worst, gain);
                violations += !(gain > 1e-12);
                ++pairs;
            }
        }
    }
    return {violations == 0 && moved_interior == 0,
            std::to_string(pairs) + " pairs, smallest decrease " + fmt("%.3e", worst) + ", " +
                std::to_string(violations) + " below 1e-12, " + std::to_string(moved_interior) +
                " interior points moved"};
}

Verdict pseudo_projection_closed_forms()
{
    std::mt19937_64 rng(2);
    const double lambdas[] = {0.5, 1.0, 1.5, 1.9};
    double worst_half = 0.0, worst_box = 0.0;
    bool all_converged = true;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t) % 4;
        Point a;
        do
            a = testing::random_point(rng, n, -1.0, 1.0);
        while (vec::norm(a) < 0.1);
        const double b = testing::random_point(rng, 1, -1.0, 1.0)[0];
        const LpInstance half(DenseMatrix::from_rows({a}), {b}, Point(n, 0.0));
        const Point x = testing::random_point(rng, n, -3.0, 3.0);
        const double excess = std::max(vec::dot(a, x) - b, 0.0);
        const Point exact = vec::sub(x, vec::scaled(a, excess / vec::dot(a, a)));
        const auto r = pseudo_projection(half, FejerParams{1.0, 1'000'000, 1e-10}, x);
        all_converged &= r.converged;
        worst_half = std::max(worst_half, vec::distance(r.point, exact));

        Point lo = testing::random_point(rng, n, -1.0, 1.0);
        Point hi = lo;
        for (auto& v : hi)
            v += testing::random_point(rng, 1, 0.1, 2.0)[0];
        const LpInstance box = testing::box(lo, hi);
        const Point y = testing::random_point(rng, n, -4.0, 4.0);
        const auto rb = pseudo_projection(box, FejerParams{lambdas[t % 4], 1'000'000, 1e-10}, y);
        all_converged &= rb.converged;
        worst_box = std::max(worst_box, vec::distance(rb.point, testing::clamp_to_box(y, lo, hi)));
    }
    return {all_converged && worst_half <= 1e-6 && worst_box <= 1e-6,
            fmt("halfspace max error %.3e, box max error %.3e", worst_half, worst_box)};
}

Verdict shift_equivariance()
{
    std::mt19937_64 rng(3);
    const double lambdas[] = {0.5, 1.0, 1.5, 1.9};
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = t % 2 == 0 ? 2 : 5;
        const auto inst = random_feasible_instance(n, row_count(n, t), 500 + t).instance;
        const auto scn = Scenario::make_translation(inst, testing::random_point(rng, n, -0.1, 0.1));
        const Point u = testing::random_point(rng, n, -3.0, 5.0);
        const std::int64_t p = static_cast<std::int64_t>(rng() % 6);
        const std::int64_t l = 1 + static_cast<std::int64_t>(rng() % 50);
        const std::int64_t L = 1 + static_cast<std::int64_t>(rng() % 20);
        worst = std::max(worst, lemma1_check(scn, u, p, l, L, lambdas[rng() % 4]));
    }
    return {worst <= 1e-9, fmt("200 trials, max residual %.3e", worst)};
}

QuestConfig tracking_config(const ScenarioDocument& doc)
{
    QuestConfig cfg;
    cfg.L = doc.L.value_or(10);
    cfg.lambda = 1.5;
    cfg.epsilon = 1e-3;
    return cfg;
}

Verdict moving_polytope_tracking()
{
    const auto doc = load("drifting_box.json");
    const Scenario& scn = doc.scenario;
    const QuestConfig cfg = tracking_config(doc);
    const auto run = quest_run(scn, *doc.z0, cfg);

    // Condition samples: the stationary-frame trajectory plus random points at
    // distance at least epsilon from M (inside that band the Quest has stopped).
    std::vector<Point> samples;
    for (const auto& e : run.epochs)
        samples.push_back(vec::sub(e.z, vec::scaled(scn.d(), static_cast<double>(e.k * cfg.L))));
    std::mt19937_64 rng(4);
    while (samples.size() < 500) {
        const Point x = testing::random_point(rng, 2, -3.0, 4.0);
        if (oracle::exact_distance(scn.base(), x) >= cfg.epsilon)
            samples.push_back(x);
    }
    samples.erase(std::remove_if(samples.begin(), samples.end(),
                                 [&](const Point& x) { return oracle::exact_distance(scn.base(), x) < cfg.epsilon; }),
                  samples.end());
    const auto margins = tracking_condition_estimate(scn, cfg.L, cfg.lambda, samples);
    double min_margin = INFINITY;
    for (const auto& m : margins.margins)
        if (m)
            min_margin = std::min(min_margin, *m);

    double worst_rise = -INFINITY;
    for (std::size_t k = 2; k < run.epochs.size(); ++k)
        worst_rise = std::max(worst_rise, *run.epochs[k].dist_exact - *run.epochs[k - 1].dist_exact);
    const bool ok = margins.all_positive() && run.terminated && run.k <= 50 &&
                    *run.epochs.back().dist_exact < cfg.epsilon && !(worst_rise > 1e-9);
    return {ok, std::to_string(samples.size()) + " condition samples, min margin " + fmt("%.3e", min_margin) +
                    ", terminated at k = " + std::to_string(run.k) +
                    fmt(" with dist %.3e, largest rise %.3e", *run.epochs.back().dist_exact, worst_rise)};
}

Verdict proof_identities()
{
    const auto doc = load("drifting_box.json");
    const auto gaps = parallelogram_identity_check(doc.scenario, *doc.z0, tracking_config(doc), 10);
    double shift = 0.0, dist = 0.0;
    for (const auto& g : gaps) {
        shift = std::max(shift, g.shift_gap);
        dist = std::max(dist, g.dist_gap);
    }
    return {gaps.size() == 11 && shift <= 1e-8 && dist <= 1e-8,
            fmt("k <= 10: max shift gap %.3e, max distance gap %.3e", shift, dist)};
}

Verdict numbering()
{
    std::size_t checked = 0, bad = 0;
    for (int K : {2, 4, 6, 8}) {
        const SequentialNumbering general(2, K);
        for (int alpha = 0; alpha <= 2 * K; ++alpha) {
            const Marker m = alpha_to_marker_2d(K, alpha);
            bad += marker_to_alpha_2d(K, m) != alpha;
            bad += general.to_marker(alpha) != m;
            bad += general.to_alpha(m) != alpha;
            ++checked;
        }
    }
    for (int n = 2; n <= 5; ++n)
        for (int K = 2; K <= 8; K += 2) {
            const Cross cross(Point(static_cast<std::size_t>(n), 0.0), K, 1.0);
            bad += cross.point_count() != n * K + 1;
            std::vector<Point> points;
            for (int alpha = 0; alpha < cross.point_count(); ++alpha) {
                bad += cross.numbering().to_alpha(cross.numbering().to_marker(alpha)) != alpha;
                points.push_back(cross.point(alpha));
            }
            std::sort(points.begin(), points.end());
            bad += std::adjacent_find(points.begin(), points.end()) != points.end();
        }
    return {bad == 0, std::to_string(checked) + " planar indices and 16 crosses checked, " + std::to_string(bad) +
                          " mismatches"};
}

struct GapScan
{
    std::size_t checked = 0;
    double worst = 0.0;
};

// Objective gaps of Step rows once `warmup` Step rows have passed since the
// start or the last re-acquisition.
GapScan scan_gaps(const Scenario& scn, std::int64_t L, const TargetingState& state, std::int64_t warmup)
{
    GapScan out;
    std::int64_t since = 0;
    for (const auto& r : state.trace) {
        if (r.event != TargetingEvent::Step) {
            since = 0;
            continue;
        }
        if (++since <= warmup)
            continue;
        const LpInstance inst = scn.instance_at(static_cast<double>(r.k * L));
        out.worst = std::max(out.worst, std::abs(inst.objective(r.g0) - oracle::exact_lp_solve(inst).value));
        ++out.checked;
    }
    return out;
}

Verdict targeting_vs_oracle()
{
    // static box, c = (1, 1)
    const auto fixed = load("static_box.json");
    const QuestConfig qcfg = tracking_config(fixed);
    const TargetingParams static_params{4, 0.05, 1e-9, 1};
    const auto start = quest_run(fixed.scenario, *fixed.z0, qcfg);
    const auto state = targeting_run(fixed.scenario, start, static_params, 125, qcfg);
    const Point vertex = oracle::exact_lp_solve(fixed.scenario.base()).optimum;
    const double radius = static_params.s * 2.0;
    int settled_at = -1;
    for (int w = 0; w <= 25 && settled_at < 0; ++w) {
        bool stays = true;
        for (int i = w; i < w + 100; ++i)
            stays &= vec::distance(state.trace[static_cast<std::size_t>(i)].g0, vertex) <= radius;
        if (stays)
            settled_at = w;
    }

    // translating box
    const auto moving = load("drifting_box.json");
    const QuestConfig mcfg = tracking_config(moving);
    const TargetingParams moving_params{4, 0.01, 1e-9, 1};
    const auto mstart = quest_run(moving.scenario, *moving.z0, mcfg);
    const auto mstate = targeting_run(moving.scenario, mstart, moving_params, 300, mcfg);
    const auto scan = scan_gaps(moving.scenario, mcfg.L, mstate, 60);
    const double bound = 2.0 * moving_params.s * std::sqrt(2.0);
    const bool clean = std::all_of(mstate.trace.begin(), mstate.trace.end(),
                                   [](const TargetingRecord& r) { return r.event == TargetingEvent::Step; });

    const bool ok = settled_at >= 0 && mstart.terminated && clean && scan.checked == 240 && scan.worst <= bound;
    return {ok, "static: within s*n of the vertex from step " + std::to_string(settled_at) +
                    "; translating: " + std::to_string(scan.checked) + " steps after warm-up 60, " +
                    fmt("worst gap %.3e vs bound %.3e", scan.worst, bound)};
}

Verdict determinism()
{
    auto solve = [](const char* scenario, int workers, std::uint64_t seed) {
        cli::RunConfig cfg;
        cfg.scenario_path = data(scenario);
        cfg.steps = 150;
        cfg.workers = workers;
        cfg.seed = seed;
        cfg.K = 8;
        std::ostringstream out, log;
        const int code = cli::cmd_solve(cfg, out, log);
        return std::to_string(code) + "\n" + out.str();
    };
    std::size_t runs = 0, mismatches = 0;
    for (const char* scenario : {"drifting_box.json", "polygon_generated.json", "jump.json"}) {
        const std::string reference = solve(scenario, 1, 7);
        for (int workers : {1, 2, 8})
            for (int repeat = 0; repeat < 2; ++repeat) {
                mismatches += solve(scenario, workers, 7) != reference;
                ++runs;
            }
    }
    return {mismatches == 0, std::to_string(runs) + " runs over 3 scenarios and workers 1/2/8, " +
                                 std::to_string(mismatches) + " differ"};
}

Verdict degenerate_reacquisition()
{
    const auto doc = load("jump.json");
    const QuestConfig qcfg = tracking_config(doc);
    const TargetingParams params{4, 0.05, 1e-9, 1};
    const auto start = quest_run(doc.scenario, *doc.z0, qcfg);
    const auto state = targeting_run(doc.scenario, start, params, 150, qcfg);
    const auto count = [&](TargetingEvent ev) {
        return std::count_if(state.trace.begin(), state.trace.end(),
                             [ev](const TargetingRecord& r) { return r.event == ev; });
    };
    const auto scan = scan_gaps(doc.scenario, qcfg.L, state, 25);
    const double bound = 2.0 * params.s * std::sqrt(2.0);
    const bool ok = count(TargetingEvent::Lost) >= 1 && count(TargetingEvent::Reacquire) >= 1 &&
                    !state.reacquisition_failed && scan.checked >= 50 && scan.worst <= bound;
    return {ok, std::to_string(count(TargetingEvent::Lost)) + " lost, " +
                    std::to_string(count(TargetingEvent::Reacquire)) + " re-acquisition epochs, " +
                    std::to_string(scan.checked) + " steps checked after warm-up, " +
                    fmt("worst gap %.3e vs bound %.3e", scan.worst, bound)};
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"1 fejer property", fejer_property},
        {"2 pseudo-projection closed forms", pseudo_projection_closed_forms},
        {"3 shift equivariance", shift_equivariance},
        {"4 moving-polytope tracking", moving_polytope_tracking},
        {"5 parallelogram identities", proof_identities},
        {"6 cross numbering", numbering},
        {"7 targeting vs oracle", targeting_vs_oracle},
        {"8 determinism", determinism},
        {"9 lost polytope re-acquisition", degenerate_reacquisition},
    };
    int failures = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("%s criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 9 criteria passed in %.1f s\n", 9 - failures, secs);
    return failures == 0 ? 0 : 1;
}
