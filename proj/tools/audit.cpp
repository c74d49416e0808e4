#include <algorithm>
#include <cmath>
#include <iostream>

#include "commands.hpp"
#include "micropol/analysis.hpp"
#include "micropol/auxiliary.hpp"
#include "micropol/schauder.hpp"
#include "micropol/stokes.hpp"
#include "report.hpp"

namespace micropol::cli {

namespace {

constexpr int kEnsembleSize = 100;
constexpr int kEnsembleModes = 4;
constexpr double kDriftTol = 0.10;
constexpr double kProbeSpreadTol = 0.20;

struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

double drift(double a, double b) { return std::abs(b - a) / std::max(std::abs(a), 1e-300); }

double max_v_ratio(const GridSpec& g, const FluidParams& params, std::uint64_t seed) {
    double m = 0.0;
    for (const ScalarField& w : band_limited_ensemble(g, kEnsembleSize, kEnsembleModes, seed)) {
        const auto v = compute_v(w, params).first;
        m = std::max(m, h1_norm(v) / lp_norm(w, 2.0));
    }
    return m;
}

}  // namespace

int audit_command(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    std::vector<Check> checks;
    const FluidParams params{cfg.nu, cfg.kappa};

    const RunOutcome run = execute_run(cfg, cfg.output_dir / "run");
    checks.push_back({"run_completed", static_cast<double>(run.exit_code), 1.0, run.exit_code != kExitFailure});
    checks.push_back({"run_ledger_violations", static_cast<double>(run.violations), 0.0, run.violations == 0});

    const GridSpec g1 = make_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    const GridSpec g2 = make_grid(2 * cfg.nx, 2 * cfg.ny, cfg.lx, cfg.ly);
    const auto gn1 = gn_audit(band_limited_ensemble(g1, kEnsembleSize, kEnsembleModes, cfg.seed));
    const auto gn2 = gn_audit(band_limited_ensemble(g2, kEnsembleSize, kEnsembleModes, cfg.seed));
    for (std::size_t k = 0; k < gn1.size(); ++k) {
        const double d = drift(gn1[k].max_ratio, gn2[k].max_ratio);
        checks.push_back({"gn_item" + std::to_string(gn1[k].item) + "_drift", d, kDriftTol, d <= kDriftTol});
        checks.push_back({"gn_item" + std::to_string(gn1[k].item) + "_max_ratio", gn1[k].max_ratio, INFINITY,
                          std::isfinite(gn1[k].max_ratio)});
    }

    if (params.kappa > 0.0) {
        const double r1 = max_v_ratio(g1, params, cfg.seed);
        const double r2 = max_v_ratio(g2, params, cfg.seed);
        checks.push_back({"v_h1_ratio", r1, INFINITY, std::isfinite(r1)});
        checks.push_back({"v_h1_ratio_drift", drift(r1, r2), kDriftTol, drift(r1, r2) <= kDriftTol});
    }

    double log_ratio = 0.0;
    for (const ScalarField& w : band_limited_ensemble(g1, 10, kEnsembleModes, cfg.seed + 1))
        log_ratio = std::max(log_ratio, log_gradient_audit(w, 4.0).ratio);
    checks.push_back({"log_gradient_ratio", log_ratio, INFINITY, std::isfinite(log_ratio)});

    const SimState s0 = initial_state(cfg);
    const double dt = cfg.dt_max > 0.0 ? cfg.dt_max : 0.25 * s0.w.grid().h;
    std::vector<double> growth;
    int probe_violations = 0;
    for (double delta : {1e-6, 1e-5, 1e-4}) {
        const UniquenessReport r = uniqueness_probe(s0.u, s0.w, delta, params, cfg.T, dt);
        growth.push_back(r.growth);
        probe_violations += r.violations;
    }
    const auto [lo, hi] = std::minmax_element(growth.begin(), growth.end());
    const double spread = (*hi - *lo) / std::max(*lo, 1e-300);
    checks.push_back({"uniqueness_envelope_violations", static_cast<double>(probe_violations), 0.0, probe_violations == 0});
    checks.push_back({"uniqueness_growth_spread", spread, kProbeSpreadTol, spread <= kProbeSpreadTol});

    CsvWriter csv(cfg.output_dir / "audit_report.csv", {"check", "value", "threshold", "pass"});
    bool all = true;
    for (const Check& c : checks) {
        csv.row({c.name, format_real(c.value), format_real(c.threshold), c.pass ? "true" : "false"});
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << format_real(c.value) << '\n';
        all = all && c.pass;
    }
    if (run.exit_code == kExitFailure) return kExitFailure;
    return all ? kExitOk : kExitViolation;
}

}  // namespace micropol::cli
