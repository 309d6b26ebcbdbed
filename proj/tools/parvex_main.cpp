// Command-line front end.
//
//   parvex validate --config c.json [--out DIR] [--seed N] [--profile P]...
//   parvex solve    --config c.json [--out DIR] [--seed N]
//   parvex norms    --config c.json --field u.csv [--out DIR]
//   parvex sweep    --config c.json [--out DIR] [--seed N]
//
// Exit codes: 0 success, 1 validation/acceptance failure, 2 usage or parse
// error, 3 solver abort.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parvex/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nonlocal degenerate parabolic solver and variable-exponent norm toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, field_path;
    std::vector<std::string> profiles;
    long long seed = -1;

    auto add_common = [&](CLI::App* cmd, bool needs_field) {
        cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
        cmd->add_option("--out", out_dir, "output directory (defaults to the config's)");
        cmd->add_option("--seed", seed, "RNG seed override");
        if (needs_field)
            cmd->add_option("--field", field_path, "stored field (CSV)")->required();
    };

    CLI::App* validate = app.add_subcommand("validate", "run hypothesis validators");
    add_common(validate, false);
    validate->add_option("--profile", profiles,
                         "validation profile: thm31 | thm32 | thm41 | growth (repeatable)");

    CLI::App* solve = app.add_subcommand("solve", "time-step the problem and run diagnostics");
    add_common(solve, false);

    CLI::App* norms = app.add_subcommand("norms", "norm report for a stored field");
    add_common(norms, true);

    CLI::App* sweep = app.add_subcommand("sweep", "run the config's parameter sweep");
    add_common(sweep, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : parvex::kExitUsage;
    }

    try {
        parvex::RunConfig rc = parvex::load_run_config(config_path);
        if (seed >= 0) {
            rc.seed = static_cast<std::uint64_t>(seed);
            rc.echo["seed"] = rc.seed;
        }
        const std::string dir = out_dir.empty() ? rc.out_dir : out_dir;
        if (validate->parsed()) return parvex::run_validate(rc, profiles, dir);
        if (solve->parsed()) return parvex::run_solve(rc, dir);
        if (norms->parsed()) return parvex::run_norms(rc, field_path, dir);
        if (sweep->parsed()) return parvex::run_sweep(rc, dir);
        return parvex::kExitUsage;
    } catch (const parvex::StructuralError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return parvex::kExitUsage;
    } catch (const parvex::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return parvex::kExitSolverAbort;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return parvex::kExitUsage;
    }
}
