#include <iostream>

#include <CLI11.hpp>

#include "nslp/cli.hpp"

int main(int argc, char** argv)
{
    nslp::cli::RunConfig cfg;

    CLI::App app{"Non-stationary LP solver: Fejer-based Quest phase and cross-based Targeting phase"};
    app.require_subcommand(1);

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--scenario", cfg.scenario_path, "Scenario JSON file")->required();
        sub->add_option("--out", cfg.out, "Output CSV path (default: standard output)");
        sub->add_option("--L", cfg.L, "Fejer iterations per data update (default: scenario \"L\", else 10)");
        sub->add_option("--lambda", cfg.lambda, "Relaxation factor in (0, 2)")->capture_default_str();
        sub->add_option("--epsilon", cfg.epsilon, "Quest termination distance")->capture_default_str();
        sub->add_option("--K", cfg.K, "Points per cohort, even >= 2 (default: 2*ceil(n/2)*2, at most 8)");
        sub->add_option("--s", cfg.s, "Cross spacing (default: epsilon)");
        sub->add_option("--steps", cfg.steps, "Targeting steps")->capture_default_str();
        sub->add_option("--feas-tol", cfg.feas_tol, "Constraint satisfaction tolerance")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Seed for generated instances")->capture_default_str();
        sub->add_option("--workers", cfg.workers, "Threads for cross membership evaluation")->capture_default_str();
        sub->add_option("--max-updates", cfg.max_updates, "Quest update budget")->capture_default_str();
    };

    auto* quest = app.add_subcommand("quest", "Run the Quest phase and write its trace");
    auto* target = app.add_subcommand("target", "Run Quest silently, then write the Targeting trace");
    auto* solve = app.add_subcommand("solve", "Run both phases and write the combined trace");
    auto* check = app.add_subcommand("oracle-check", "Compare Targeting centers with the exact LP optimum");
    for (auto* sub : {quest, target, solve, check})
        add_common(sub);
    check->add_option("--warmup", cfg.warmup, "Targeting steps excluded from the gap check")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nslp::cli::kInputError;
    }

    for (auto* sub : {quest, target, solve, check})
        if (sub->parsed())
            cfg.command = sub->get_name();

    return nslp::cli::run(cfg, std::cerr);
}
