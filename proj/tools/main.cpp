#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "micropol/elliptic.hpp"
#include "micropol/snapshot.hpp"

using namespace micropol;
using namespace micropol::cli;

int main(int argc, char** argv) {
    CLI::App app{"micropol: 2D micropolar solver and estimate auditor"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    for (const char* name : {"run", "fixed-point", "audit", "sweep", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file (key = value)")->required();
        sub->add_option("--out-dir", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--seed", seed, "random seed for ensembles (overrides seed)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), kExitConfig);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        cfg.mode = parse_mode(command);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (app.get_subcommands().front()->count("--seed") > 0) cfg.seed = seed;
        if (cfg.initial_condition == "snapshot") {
            const SimState s = read_snapshot(cfg.ic_snapshot);
            cfg.nx = s.w.grid().nx;
            cfg.ny = s.w.grid().ny;
            cfg.lx = s.w.grid().lx;
            cfg.ly = s.w.grid().ly;
        }
    } catch (const ConfigParseError& e) {
        std::cerr << "config error in " << config_path << ":\n" << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        switch (cfg.mode) {
            case Mode::Run: return run_command(cfg);
            case Mode::FixedPoint: return fixed_point_command(cfg);
            case Mode::Audit: return audit_command(cfg);
            case Mode::Sweep: return sweep_command(cfg);
            case Mode::Verify: return verify_command(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NonConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
