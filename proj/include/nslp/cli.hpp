#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "nslp/quest.hpp"
#include "nslp/scenarios.hpp"
#include "nslp/targeting.hpp"

namespace nslp::cli {

/// Process exit codes shared by every command.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,       ///< unreadable/unparseable scenario or invalid parameter
    kNotTerminated = 2,    ///< Quest budget exhausted (including failed re-acquisition)
    kUnsupported = 3,      ///< oracle cannot handle the scenario's dimension
    kInfeasible = 4,       ///< oracle reports an empty feasible region
    kCheckFailed = 5,      ///< oracle-check: a post-warm-up gap exceeded the bound
};

struct RunConfig
{
    std::string scenario_path;
    std::string command = "solve";
    std::optional<std::int64_t> L;   ///< falls back to the scenario's "L", then 10
    double lambda = 1.5;
    double epsilon = 1e-3;
    std::optional<int> K;            ///< falls back to default_cohort_size(n)
    std::optional<double> s;         ///< falls back to the scenario's "s", then epsilon
    std::int64_t steps = 100;
    double feas_tol = 1e-9;
    std::uint64_t seed = 0;
    int workers = 1;
    std::int64_t max_updates = 10'000;
    std::int64_t warmup = 25;
    std::string out;                 ///< empty: standard output
};

/** Resolved run parameters for a loaded scenario. */
struct ResolvedRun
{
    ScenarioDocument doc;
    QuestConfig quest;
    TargetingParams targeting;
    Point z0;
};

/** Loads and validates; throws FormatError / ParameterError. */
ResolvedRun resolve(const RunConfig& cfg);

/** Trace header: phase,k,t,dist_est,dist_exact,objective,g0_0..g0_{n-1} */
std::string trace_header(std::size_t n);

/** Shortest round-trip decimal form; locale independent. */
std::string format_real(double v);

void write_quest_rows(std::ostream& out, std::int64_t L, const QuestResult& quest);
void write_targeting_rows(std::ostream& out, const Scenario& scn, std::int64_t L, const TargetingState& state);

/**
 * Each command writes its CSV to `out` and human-readable diagnostics to
 * `log`, and returns an ExitCode.
 */
int cmd_quest(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_target(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/** Dispatches on cfg.command and handles cfg.out (file or standard output). */
int run(const RunConfig& cfg, std::ostream& log);

} // namespace nslp::cli
