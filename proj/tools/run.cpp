#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "commands.hpp"
#include "micropol/analysis.hpp"
#include "micropol/elliptic.hpp"
#include "micropol/snapshot.hpp"
#include "report.hpp"

namespace micropol::cli {

namespace {

constexpr double kLedgerFloor = 1e-12;
// Ledger scales below this fraction of the peak scale are solver noise.
constexpr double kNoiseFraction = 1e-8;
constexpr double kLpTol = 1e-3;
constexpr double kGradWTol = 1e-2;

}  // namespace

SimState initial_state(const RunConfig& cfg) {
    if (cfg.initial_condition == "snapshot") {
        SimState s = read_snapshot(cfg.ic_snapshot);
        s.step = 0;
        if (!s.u.no_slip()) throw ConfigError("snapshot velocity is not no-slip: " + cfg.ic_snapshot.string());
        return s;
    }
    const GridSpec g = make_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    SimState s;
    s.u = VelocityField(g);
    s.w = ScalarField(g);
    if (cfg.initial_condition == "zero") return s;

    const double pi = std::acos(-1.0);
    const double a = cfg.ic_amplitude;
    NodeField psi(g);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double sx = std::sin(pi * g.xf(i) / g.lx);
            const double sy = std::sin(pi * g.yf(j) / g.ly);
            psi(i, j) = a * sx * sx * sy * sy / pi;
        }
    s.u = curl(psi, true);
    s.u.enforce_no_slip();
    s.w = ScalarField::sample(g, [&](double x, double y) { return a * std::sin(pi * x / g.lx) * std::sin(pi * y / g.ly); });
    return s;
}

RunOutcome execute_run(const RunConfig& cfg, const std::filesystem::path& out) {
    RunOutcome res;
    std::filesystem::create_directories(out);
    Summary summary;
    const FluidParams params{cfg.nu, cfg.kappa};
    params.validate();
    const SimState s0 = initial_state(cfg);
    const GridSpec& g = s0.w.grid();
    summary.add("nx", g.nx);
    summary.add("ny", g.ny);
    summary.add("nu", params.nu);
    summary.add("kappa", params.kappa);
    summary.add("T", cfg.T);

    const CompatibilityDefect compat = check_compatibility(s0.u, s0.w, params);
    summary.add("compat_boundary_defect", compat.boundary_defect);
    summary.add("compat_divergence_l2", compat.divergence_l2);
    summary.add("compat_wall_trace_l2", compat.wall_trace_l2);
    summary.add("compat_neumann_projection", compat.neumann_projection);
    write_snapshot(out / "snapshot_initial.mpol", s0);

    DiagnosticsEngine engine(s0, params, cfg.solver_tol);
    CsvWriter csv(out / "diagnostics.csv", DiagnosticsRecord::field_names());
    csv.row(engine.initial_record().values());

    DtPolicy policy;
    policy.cfl_max = cfg.cfl_max;
    policy.dt_floor = cfg.dt_floor;
    policy.dt_max = cfg.dt_max;

    SimState last = s0;
    double prev_linf = engine.initial_record().linf_w;
    int energy_violations = 0;
    double peak_energy_scale = 0.0;
    double peak_l4_scale = 0.0;
    auto observer = [&](const SimState& before, const SimState& after, double dt) {
        const DiagnosticsRecord rec = engine.observe(before, after, dt);
        const LedgerTerms& e = engine.last_energy();
        peak_energy_scale = std::max(peak_energy_scale, e.scale);
        const double rel =
            std::abs(e.defect) / std::max({e.scale, kNoiseFraction * peak_energy_scale, kLedgerFloor});
        res.max_energy_defect = std::max(res.max_energy_defect, rel);
        if (rel > cfg.energy_tol) ++energy_violations;
        const LedgerTerms& l4 = engine.last_l4();
        peak_l4_scale = std::max(peak_l4_scale, l4.scale);
        res.max_l4_defect = std::max(res.max_l4_defect,
            std::abs(l4.defect) / std::max({l4.scale, kNoiseFraction * peak_l4_scale, kLedgerFloor}));
        if (rec.linf_w > prev_linf) res.linf_w_monotone = false;
        prev_linf = rec.linf_w;
        const bool final_step = after.t >= cfg.T;
        if (after.step % cfg.diagnostics_interval == 0 || final_step) csv.row(rec.values());
        if (cfg.snapshot_interval > 0 && after.step % cfg.snapshot_interval == 0)
            write_snapshot(out / ("snapshot_" + std::to_string(after.step) + ".mpol"), after);
        last = after;
    };

    try {
        const RunResult rr = run(s0, params, cfg.T, policy, observer, cfg.solver_tol);
        write_snapshot(out / "snapshot_final.mpol", rr.final_state);
    } catch (const StepSizeError& e) {
        write_snapshot(out / "snapshot_failure.mpol", last);
        res.exit_code = kExitFailure;
        res.error = e.what();
    } catch (const NonConvergenceError& e) {
        write_snapshot(out / "snapshot_failure.mpol", last);
        res.exit_code = kExitFailure;
        res.error = std::string(e.what()) + " (residual " + format_real(e.residual()) + ")";
    }
    res.steps = last.step;

    const auto& samples = engine.samples();
    int lp_violations = 0;
    for (int q = 0; q < static_cast<int>(kLedgerExponents.size()); ++q) {
        const LpLedgerReport lp = lp_linf_ledger(samples, params, q, kLpTol);
        const std::string tag = std::isinf(lp.q) ? "inf" : std::to_string(static_cast<int>(lp.q));
        summary.add("lp_ledger_q" + tag + "_violations", lp.violations);
        summary.add("lp_ledger_q" + tag + "_majorant_violations", lp.majorant_violations);
        summary.add("lp_ledger_q" + tag + "_max_excess", lp.max_excess);
        lp_violations += lp.violations + lp.majorant_violations;
    }
    const GradWLedgerReport gw = gradw_ledger(samples, params, kGradWTol);
    res.gradw_rate = gw.fitted_rate;
    summary.add("gradw_violations", gw.violations);
    summary.add("gradw_envelope_violations", gw.envelope_violations);
    summary.add("gradw_fitted_rate", gw.fitted_rate);
    summary.add("gradw_max", gw.max_grad_w);

    GronwallConstants constants;
    constants.c_a1 = energy_growth_constant(params);
    constants.c_a2 = fit_a2_rate(samples, params);
    res.a2_rate = constants.c_a2;
    const GronwallReport gr = gronwall_envelopes(samples, params, constants);
    summary.add("a1_constant", constants.c_a1);
    summary.add("a1_violations", gr.violations_a1);
    summary.add("a2_fitted_rate", constants.c_a2);
    summary.add("a2_violations", gr.violations_a2);
    summary.add("energy_tol", cfg.energy_tol);
    summary.add("energy_violations", energy_violations);
    summary.add("max_energy_defect", res.max_energy_defect);
    summary.add("max_l4_defect", res.max_l4_defect);
    summary.add("linf_w_monotone", res.linf_w_monotone);
    summary.add("steps", static_cast<long long>(res.steps));

    res.violations = lp_violations + gw.violations + gw.envelope_violations + gr.violations_a1 + gr.violations_a2 +
                     energy_violations;
    summary.add("violations", res.violations);
    if (res.exit_code == kExitOk && res.violations > 0) res.exit_code = kExitViolation;
    if (!res.error.empty()) summary.add("error", res.error);
    summary.add("exit_code", res.exit_code);
    summary.write(out / "summary.txt");
    return res;
}

int run_command(const RunConfig& cfg) {
    const RunOutcome r = execute_run(cfg, cfg.output_dir);
    std::cout << "run: steps=" << r.steps << " violations=" << r.violations
              << " max_energy_defect=" << format_real(r.max_energy_defect) << " exit=" << r.exit_code << '\n';
    if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
    if (r.violations > 0)
        std::cerr << "ledger violations recorded in " << (cfg.output_dir / "summary.txt").string() << '\n';
    return r.exit_code;
}

int sweep_command(const RunConfig& cfg) {
    struct Cell {
        double nu, kappa;
        int nx;
        RunOutcome outcome;
    };
    const std::vector<double> nus = cfg.sweep_nu.empty() ? std::vector<double>{cfg.nu} : cfg.sweep_nu;
    const std::vector<double> kappas = cfg.sweep_kappa.empty() ? std::vector<double>{cfg.kappa} : cfg.sweep_kappa;
    const std::vector<int> nxs = cfg.sweep_nx.empty() ? std::vector<int>{cfg.nx} : cfg.sweep_nx;
    std::vector<Cell> cells;
    for (double nu : nus)
        for (double kappa : kappas)
            for (int nx : nxs) cells.push_back({nu, kappa, nx, {}});

    std::filesystem::create_directories(cfg.output_dir);
    auto cell_dir = [&](const Cell& c) {
        std::ostringstream os;
        os << "cell_nu" << c.nu << "_kappa" << c.kappa << "_nx" << c.nx;
        return cfg.output_dir / os.str();
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            Cell& c = cells[k];
            RunConfig sub = cfg;
            sub.nu = c.nu;
            sub.kappa = c.kappa;
            sub.nx = c.nx;
            sub.ny = static_cast<int>(std::lround(c.nx * cfg.ly / cfg.lx));
            try {
                c.outcome = execute_run(sub, cell_dir(c));
            } catch (const std::exception& e) {
                c.outcome.exit_code = kExitFailure;
                c.outcome.error = e.what();
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto pool_size = static_cast<unsigned>(std::min<std::size_t>(hw, cells.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < pool_size; ++k) pool.emplace_back(worker);
    }

    CsvWriter table(cfg.output_dir / "sweep_summary.csv",
                    {"nu", "kappa", "nx", "exit_code", "steps", "violations", "max_energy_defect", "a2_rate",
                     "gradw_rate", "linf_w_monotone", "error"});
    int exit_code = kExitOk;
    std::cout << "nu,kappa,nx,exit,steps,violations,max_energy_defect,a2_rate,linf_w_monotone\n";
    for (const Cell& c : cells) {
        const RunOutcome& o = c.outcome;
        table.row({format_real(c.nu), format_real(c.kappa), std::to_string(c.nx), std::to_string(o.exit_code),
                   std::to_string(o.steps), std::to_string(o.violations), format_real(o.max_energy_defect),
                   format_real(o.a2_rate), format_real(o.gradw_rate), o.linf_w_monotone ? "true" : "false",
                   o.error});
        std::cout << c.nu << ',' << c.kappa << ',' << c.nx << ',' << o.exit_code << ',' << o.steps << ','
                  << o.violations << ',' << format_real(o.max_energy_defect) << ',' << format_real(o.a2_rate)
                  << ',' << (o.linf_w_monotone ? "true" : "false") << '\n';
        if (o.exit_code != kExitOk) exit_code = kExitViolation;
    }
    return exit_code;
}

}  // namespace micropol::cli
