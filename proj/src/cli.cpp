#include "nslp/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nslp/errors.hpp"
#include "nslp/oracle.hpp"

namespace nslp::cli {

namespace {

constexpr std::int64_t kDefaultL = 10;

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open scenario file \"" + path + "\"");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("scenario file \"" + path + "\" is not valid JSON: " + e.what());
    }
}

double time_of(std::int64_t k, std::int64_t L) { return static_cast<double>(k) * static_cast<double>(L); }

std::optional<double> exact_distance_if_supported(const LpInstance& inst, std::span<const double> x)
{
    if (!oracle::supports_exact_distance(inst))
        return std::nullopt;
    try {
        return oracle::exact_distance(inst, x);
    } catch (const EmptyRegionError&) {
        return std::nullopt;
    }
}

void write_row(std::ostream& out, const std::string& phase, std::int64_t k, std::int64_t L,
               const std::optional<double>& dist_est, const std::optional<double>& dist_exact, double objective,
               std::span<const double> g0)
{
    out << phase << ',' << k << ',' << format_real(time_of(k, L)) << ',';
    if (dist_est)
        out << format_real(*dist_est);
    out << ',';
    if (dist_exact)
        out << format_real(*dist_exact);
    out << ',' << format_real(objective);
    for (double v : g0)
        out << ',' << format_real(v);
    out << '\n';
}

template <typename Body>
int guarded(std::ostream& log, Body&& body)
{
    try {
        return body();
    } catch (const FormatError& e) {
        log << "error: " << e.what() << '\n';
    } catch (const ParameterError& e) {
        log << "error: invalid parameter: " << e.what() << '\n';
    } catch (const ContractViolation& e) {
        log << "error: " << e.what() << '\n';
    } catch (const NumericalError& e) {
        log << "error: numerical failure: " << e.what() << '\n';
    } catch (const EmptyRegionError& e) {
        log << "infeasible: " << e.what() << '\n';
        return static_cast<int>(kInfeasible);
    } catch (const UnsupportedError& e) {
        log << "unsupported: " << e.what() << '\n';
        return static_cast<int>(kUnsupported);
    }
    return static_cast<int>(kInputError);
}

} // namespace

std::string format_real(double v)
{
    if (v == 0.0)
        v = 0.0; // fold -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string trace_header(std::size_t n)
{
    std::string h = "phase,k,t,dist_est,dist_exact,objective";
    for (std::size_t j = 0; j < n; ++j)
        h += ",g0_" + std::to_string(j);
    return h;
}

ResolvedRun resolve(const RunConfig& cfg)
{
    ScenarioDocument doc = scenario_from_json(read_json_file(cfg.scenario_path), cfg.seed);
    const std::size_t n = doc.scenario.n();

    QuestConfig quest;
    quest.L = cfg.L.value_or(doc.L.value_or(kDefaultL));
    quest.lambda = cfg.lambda;
    quest.epsilon = cfg.epsilon;
    quest.max_updates = cfg.max_updates;
    quest.feas_tol = cfg.feas_tol;
    quest.probe.lambda = cfg.lambda;
    quest.validate();

    TargetingParams targeting;
    targeting.K = cfg.K.value_or(default_cohort_size(n));
    targeting.s = cfg.s.value_or(doc.s.value_or(cfg.epsilon));
    targeting.feas_tol = cfg.feas_tol;
    targeting.workers = cfg.workers;
    targeting.validate();

    if (cfg.steps < 0)
        throw ParameterError("--steps must be non-negative");
    if (cfg.warmup < 0)
        throw ParameterError("--warmup must be non-negative");

    Point z0 = doc.z0.value_or(Point(n, 0.0));
    return {std::move(doc), quest, targeting, std::move(z0)};
}

void write_quest_rows(std::ostream& out, std::int64_t L, const QuestResult& quest)
{
    for (const auto& e : quest.epochs)
        write_row(out, "quest", e.k, L, e.dist_est, e.dist_exact, e.objective, e.z);
}

void write_targeting_rows(std::ostream& out, const Scenario& scn, std::int64_t L, const TargetingState& state)
{
    for (const auto& r : state.trace) {
        const LpInstance inst = scn.instance_at(time_of(r.k, L));
        write_row(out, to_string(r.event), r.k, L, r.dist_est, exact_distance_if_supported(inst, r.g0), r.objective,
                  r.g0);
    }
}

int cmd_quest(const RunConfig& cfg, std::ostream& out, std::ostream& log)
{
    return guarded(log, [&] {
        const ResolvedRun run = resolve(cfg);
        const QuestResult quest = quest_run(run.doc.scenario, run.z0, run.quest);
        out << trace_header(run.doc.scenario.n()) << '\n';
        write_quest_rows(out, run.quest.L, quest);
        log << "quest: " << (quest.terminated ? "terminated" : "budget exhausted") << " at k = " << quest.k
            << " (distance: " << to_string(quest.method) << ")\n";
        return quest.terminated ? kOk : kNotTerminated;
    });
}

namespace {

int run_pipeline(const RunConfig& cfg, std::ostream& out, std::ostream& log, bool quest_rows)
{
    return guarded(log, [&] {
        const ResolvedRun run = resolve(cfg);
        const Scenario& scn = run.doc.scenario;
        const QuestResult quest = quest_run(scn, run.z0, run.quest);
        out << trace_header(scn.n()) << '\n';
        if (quest_rows)
            write_quest_rows(out, run.quest.L, quest);
        if (!quest.terminated) {
            log << "quest: budget exhausted at k = " << quest.k << "\n";
            return static_cast<int>(kNotTerminated);
        }
        const TargetingState state = targeting_run(scn, quest, run.targeting, cfg.steps, run.quest);
        write_targeting_rows(out, scn, run.quest.L, state);
        if (state.reacquisition_failed) {
            log << "targeting: polytope lost and not re-acquired by k = " << state.k << "\n";
            return static_cast<int>(kNotTerminated);
        }
        log << "solve: quest terminated at k = " << quest.k << ", targeting finished at k = " << state.k
            << ", objective " << format_real(scn.instance_at(time_of(state.k, run.quest.L)).objective(state.cross.g0()))
            << "\n";
        return static_cast<int>(kOk);
    });
}

} // namespace

int cmd_target(const RunConfig& cfg, std::ostream& out, std::ostream& log)
{
    return run_pipeline(cfg, out, log, false);
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& log)
{
    return run_pipeline(cfg, out, log, true);
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& log)
{
    return guarded(log, [&] {
        const ResolvedRun run = resolve(cfg);
        const Scenario& scn = run.doc.scenario;
        const std::size_t n = scn.n();
        if (n > 3) {
            log << "oracle-check: unsupported dimension n = " << n << " (oracle handles n <= 3)\n";
            return static_cast<int>(kUnsupported);
        }
        const LpInstance initial = scn.instance_at(0.0);
        if (!oracle::exact_lp_solve(initial).feasible) {
            log << "oracle-check: infeasible\n";
            out << "infeasible\n";
            return static_cast<int>(kInfeasible);
        }

        const QuestResult quest = quest_run(scn, run.z0, run.quest);
        if (!quest.terminated) {
            log << "oracle-check: quest budget exhausted at k = " << quest.k << "\n";
            return static_cast<int>(kNotTerminated);
        }
        const TargetingState state = targeting_run(scn, quest, run.targeting, cfg.steps, run.quest);

        out << "k,t,status,opt_value,objective,gap,bound,checked";
        for (std::size_t j = 0; j < n; ++j)
            out << ",opt_" << j;
        for (std::size_t j = 0; j < n; ++j)
            out << ",g0_" << j;
        out << '\n';

        int status = kOk;
        std::int64_t since_start = 0;
        std::int64_t checked = 0;
        double worst = 0.0;
        for (const auto& r : state.trace) {
            if (r.event != TargetingEvent::Step) {
                since_start = 0;
                continue;
            }
            ++since_start;
            const LpInstance inst = scn.instance_at(time_of(r.k, run.quest.L));
            const auto sol = oracle::exact_lp_solve(inst);
            out << r.k << ',' << format_real(time_of(r.k, run.quest.L)) << ',';
            if (!sol.feasible || !sol.bounded) {
                out << (sol.feasible ? "unbounded" : "infeasible") << ",,,,,";
                for (std::size_t j = 0; j < n; ++j)
                    out << ',';
                for (double v : r.g0)
                    out << ',' << format_real(v);
                out << '\n';
                if (!sol.feasible)
                    status = kInfeasible;
                else if (status == kOk)
                    status = kUnsupported;
                continue;
            }
            const double gap = std::abs(inst.objective(r.g0) - sol.value);
            const double bound = 2.0 * run.targeting.s * vec::norm(inst.c());
            const bool post_warmup = since_start > cfg.warmup;
            if (post_warmup) {
                ++checked;
                worst = std::max(worst, gap);
                if (gap > bound && status == kOk)
                    status = kCheckFailed;
            }
            out << "ok," << format_real(sol.value) << ',' << format_real(inst.objective(r.g0)) << ','
                << format_real(gap) << ',' << format_real(bound) << ',' << (post_warmup ? 1 : 0);
            for (double v : sol.optimum)
                out << ',' << format_real(v);
            for (double v : r.g0)
                out << ',' << format_real(v);
            out << '\n';
        }
        if (state.reacquisition_failed && status == kOk)
            status = kNotTerminated;
        log << "oracle-check: " << checked << " post-warm-up steps, worst gap " << format_real(worst) << ": "
            << (status == kOk ? "PASS" : "FAIL") << "\n";
        return status;
    });
}

int run(const RunConfig& cfg, std::ostream& log)
{
    auto dispatch = [&](std::ostream& out) {
        if (cfg.command == "quest")
            return cmd_quest(cfg, out, log);
        if (cfg.command == "target")
            return cmd_target(cfg, out, log);
        if (cfg.command == "solve")
            return cmd_solve(cfg, out, log);
        if (cfg.command == "oracle-check")
            return cmd_oracle_check(cfg, out, log);
        log << "error: unknown command \"" << cfg.command << "\"\n";
        return static_cast<int>(kInputError);
    };
    if (cfg.out.empty())
        return dispatch(std::cout);

    // Input errors leave no output file behind.
    std::ostringstream buffer;
    const int code = dispatch(buffer);
    if (code == kInputError)
        return code;
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        log << "error: cannot write \"" << cfg.out << "\"\n";
        return kInputError;
    }
    file << buffer.str();
    return code;
}

} // namespace nslp::cli
