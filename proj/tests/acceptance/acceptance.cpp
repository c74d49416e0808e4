#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "commands.hpp"
#include "micropol/analysis.hpp"
#include "micropol/auxiliary.hpp"
#include "micropol/elliptic.hpp"
#include "micropol/micropolar.hpp"
#include "micropol/norms.hpp"
#include "micropol/schauder.hpp"
#include "micropol/stokes.hpp"

using namespace micropol;

namespace {

namespace fs = std::filesystem;

const double pi = std::acos(-1.0);

// Pinned tolerances.
constexpr double kOrderMin = 1.9;
constexpr double kEnergyStepTol = 0.02;
constexpr double kShrinkMax = 0.6;
constexpr double kNoiseFraction = 1e-8;
constexpr double kL4InequalityTol = 1e-3;
constexpr double kAuxDriftMax = 0.10;
constexpr double kGResidualTier = 1e-2;
constexpr double kGShrinkMin = 1.5;
constexpr int kPicardMaxIterations = 20;
constexpr double kPicardTol = 1e-8;
constexpr double kPicardGapFactor = 5.0;
constexpr double kUniquenessSpreadMax = 0.20;
constexpr double kGnDriftMax = 0.10;
constexpr int kEnsembleSize = 100;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

SimState reference_state(int n, double amplitude = 1.0) {
    cli::RunConfig cfg;
    cfg.nx = cfg.ny = n;
    cfg.ic_amplitude = amplitude;
    return cli::initial_state(cfg);
}

// --- 1 ---------------------------------------------------------------------

double sq(double t) { return std::pow(std::sin(pi * t), 2); }

double dirichlet_error(int n) {
    const GridSpec g = make_grid(n, n, 1.0, 1.0);
    const ScalarField rhs = ScalarField::sample(g, [](double x, double y) {
        return -2.0 * pi * pi * (sq(x) * std::cos(2.0 * pi * y) + sq(y) * std::cos(2.0 * pi * x));
    });
    const ScalarField exact = ScalarField::sample(g, [](double x, double y) { return sq(x) * sq(y); });
    return lp_norm(poisson_dirichlet(rhs, {.tol = 1e-11}).solution - exact, INFINITY);
}

double stokes_error(int n) {
    const GridSpec g = make_grid(n, n, 1.0, 1.0);
    const VelocityField f = VelocityField::sample(
        g,
        [](double x, double y) {
            return 2.0 * std::pow(pi, 3) * std::sin(2.0 * pi * y) * (4.0 * sq(x) - 1.0) -
                   pi * std::sin(pi * x) * std::cos(pi * y);
        },
        [](double x, double y) {
            return -2.0 * std::pow(pi, 3) * std::sin(2.0 * pi * x) * (4.0 * sq(y) - 1.0) -
                   pi * std::cos(pi * x) * std::sin(pi * y);
        },
        false);
    const VelocityField exact = VelocityField::sample(
        g, [](double x, double y) { return pi * sq(x) * std::sin(2.0 * pi * y); },
        [](double x, double y) { return -pi * std::sin(2.0 * pi * x) * sq(y); }, true);
    return lp_norm(stokes_stationary(f, 1e-11).velocity - exact, INFINITY);
}

Outcome criterion_orders() {
    const double pd = std::log2(dirichlet_error(32) / dirichlet_error(64));
    const double st = std::log2(stokes_error(32) / stokes_error(64));
    return {pd >= kOrderMin && st >= kOrderMin,
            "dirichlet_order=" + fmt("%.4f", pd) + " stokes_order=" + fmt("%.4f", st) + " (>= 1.9)"};
}

// --- 2, 3, 5 -----------------------------------------------------------------

struct ReferenceStats {
    long steps = 0;
    double max_energy = 0.0;
    double max_l4 = 0.0;
    int l4_inequality_violations = 0;
    double max_g_residual = 0.0;
};

ReferenceStats reference_run(int n) {
    const SimState s0 = reference_state(n);
    const FluidParams params{0.1, 0.1};
    DiagnosticsEngine engine(s0, params, 1e-10);
    ReferenceStats st;
    double peak_e = 0.0, peak_l4 = 0.0;
    auto observer = [&](const SimState& before, const SimState& after, double dt) {
        const DiagnosticsRecord rec = engine.observe(before, after, dt);
        const LedgerTerms& e = engine.last_energy();
        const LedgerTerms& l4 = engine.last_l4();
        peak_e = std::max(peak_e, e.scale);
        peak_l4 = std::max(peak_l4, l4.scale);
        st.max_energy = std::max(st.max_energy, std::abs(e.defect) / std::max(e.scale, kNoiseFraction * peak_e));
        st.max_l4 = std::max(st.max_l4, std::abs(l4.defect) / std::max(l4.scale, kNoiseFraction * peak_l4));
        // Hoelder form: (1/4) d/dt |w|_4^4 + 4 kappa |w|_4^4 <= 2 kappa |curl u|_4 |w|_4^3.
        const auto& samples = engine.samples();
        const StateSample& a = samples[samples.size() - 2];
        const StateSample& b = samples.back();
        const double bound = 2.0 * params.kappa * std::max(a.curl_q[1], b.curl_q[1]) *
                             std::pow(std::max(a.w_q[1], b.w_q[1]), 3);
        if (l4.lhs > bound + kL4InequalityTol * std::max(l4.scale, kNoiseFraction * peak_l4))
            ++st.l4_inequality_violations;
        st.max_g_residual = std::max(st.max_g_residual, rec.g_residual);
        ++st.steps;
    };
    run(s0, params, 1.0, DtPolicy{}, observer, 1e-10);
    return st;
}

// --- 4 ---------------------------------------------------------------------

double aux_ratio(int n) {
    const GridSpec g = make_grid(n, n, 1.0, 1.0);
    const FluidParams params{0.1, 0.1};
    double worst = 0.0;
    for (const ScalarField& w : band_limited_ensemble(g, kEnsembleSize, 8, 20240611)) {
        const VelocityField v = compute_v(w, params, 1e-11).first;
        worst = std::max(worst, h1_norm(v) / lp_norm(w, 2.0));
    }
    return worst;
}

Outcome criterion_aux() {
    const double r64 = aux_ratio(64), r128 = aux_ratio(128);
    const double drift = std::abs(r64 - r128) / r128;
    return {drift <= kAuxDriftMax, "max |v|_H1/|w|_L2: 64^2=" + fmt("%.6g", r64) + " 128^2=" + fmt("%.6g", r128) +
                                       " drift=" + fmt("%.4f", drift) + " (<= 0.10)"};
}

// --- 6 ---------------------------------------------------------------------

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::bit_cast<std::uint64_t>(a[k]) != std::bit_cast<std::uint64_t>(b[k])) return false;
    return true;
}

Outcome criterion_decoupling() {
    const SimState s0 = reference_state(64);
    const FluidParams params{0.1, 0.0};
    VelocityField ns = s0.u;
    double prev = lp_norm(s0.w, INFINITY);
    int increases = 0, mismatches = 0;
    long steps = 0;
    auto observer = [&](const SimState&, const SimState& after, double dt) {
        const double m = lp_norm(after.w, INFINITY);
        if (m > prev) ++increases;
        prev = m;
        ns = navier_stokes_step(ns, params.total_viscosity(), dt, {.tol = 1e-10});
        if (!same_bits(ns.ux_data(), after.u.ux_data()) || !same_bits(ns.uy_data(), after.u.uy_data())) ++mismatches;
        ++steps;
    };
    run(s0, params, 1.0, DtPolicy{}, observer, 1e-10);
    return {increases == 0 && mismatches == 0 && steps > 0,
            "steps=" + std::to_string(steps) + " linf_w_increases=" + std::to_string(increases) +
                " ns_bit_mismatches=" + std::to_string(mismatches)};
}

// --- 7 ---------------------------------------------------------------------

Outcome criterion_fixed_point() {
    const SimState s0 = reference_state(64, 0.1);
    const FluidParams params{0.1, 0.1};
    const double h = s0.u.grid().h;
    FixedPointOptions opts;
    opts.epsilon = h;
    opts.tol = kPicardTol;
    opts.max_iterations = kPicardMaxIterations;
    const FixedPointResult fp = fixed_point_solve(s0.u, s0.w, params, 0.25, opts);
    const auto& d = fp.report.distances;
    double worst_ratio = 0.0;
    for (std::size_t k = 1; k < d.size(); ++k) worst_ratio = std::max(worst_ratio, d[k] / d[k - 1]);
    const double dt = fp.trajectory.dt;
    const Trajectory direct = direct_trajectory(s0.u, s0.w, params, 0.25, dt);
    const double gap = sup_l2_distance(direct.u, fp.trajectory.u);
    const double bound = kPicardGapFactor * (h + dt);
    const bool ok = fp.report.converged && fp.report.iterations <= kPicardMaxIterations && d.size() >= 2 &&
                    worst_ratio < 1.0 && gap <= bound;
    return {ok, "iterations=" + std::to_string(fp.report.iterations) + " max_contraction=" +
                    fmt("%.3g", worst_ratio) + " gap=" + fmt("%.3g", gap) + " (<= " + fmt("%.3g", bound) + ")"};
}

// --- 8 ---------------------------------------------------------------------

Outcome criterion_uniqueness() {
    const SimState s0 = reference_state(32);
    const FluidParams params{0.1, 0.1};
    const double dt = 0.25 * s0.u.grid().h;
    double lo = INFINITY, hi = 0.0;
    int violations = 0;
    for (double delta : {1e-6, 1e-5, 1e-4}) {
        const UniquenessReport r = uniqueness_probe(s0.u, s0.w, delta, params, 0.5, dt);
        lo = std::min(lo, r.growth);
        hi = std::max(hi, r.growth);
        violations += r.violations;
    }
    const double spread = (hi - lo) / lo;
    return {violations == 0 && spread <= kUniquenessSpreadMax,
            "growth in [" + fmt("%.6g", lo) + ", " + fmt("%.6g", hi) + "] spread=" + fmt("%.3g", spread) +
                " (<= 0.20) envelope_violations=" + std::to_string(violations)};
}

// --- 9 ---------------------------------------------------------------------

Outcome criterion_gn() {
    const auto coarse = gn_audit(band_limited_ensemble(make_grid(64, 64, 1.0, 1.0), kEnsembleSize, 8, 7));
    const auto fine = gn_audit(band_limited_ensemble(make_grid(128, 128, 1.0, 1.0), kEnsembleSize, 8, 7));
    double worst = 0.0;
    std::string detail;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        const double drift = std::abs(coarse[k].max_ratio - fine[k].max_ratio) / fine[k].max_ratio;
        worst = std::max(worst, drift);
        detail += "item" + std::to_string(coarse[k].item) + "=" + fmt("%.4f", drift) + " ";
    }
    return {worst <= kGnDriftMax, detail + "(<= 0.10)"};
}

// --- 10 --------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion_determinism(const fs::path& out) {
    cli::RunConfig cfg;
    fs::remove_all(out / "det_a");
    fs::remove_all(out / "det_b");
    const cli::RunOutcome a = cli::execute_run(cfg, out / "det_a");
    const cli::RunOutcome b = cli::execute_run(cfg, out / "det_b");
    const std::string da = slurp(out / "det_a" / "diagnostics.csv");
    const std::string db = slurp(out / "det_b" / "diagnostics.csv");
    const bool ok = a.exit_code == 0 && b.exit_code == 0 && !da.empty() && da == db;
    return {ok, "bytes=" + std::to_string(da.size()) + " identical=" + (da == db ? "true" : "false") +
                    " exit=" + std::to_string(a.exit_code) + "/" + std::to_string(b.exit_code)};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
    fs::create_directories(out);
    int failures = 0;
    std::ofstream log(out / "acceptance_report.txt");
    auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        char line[512];
        std::snprintf(line, sizeof line, "%s [%d] %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name,
                      o.detail.c_str(), secs);
        std::fputs(line, stdout);
        std::fflush(stdout);
        log << line << std::flush;
    };

    report(1, "elliptic_stokes_convergence", criterion_orders);

    ReferenceStats r64, r128;
    report(2, "energy_identity", [&] {
        r64 = reference_run(64);
        r128 = reference_run(128);
        const double shrink = r128.max_energy / r64.max_energy;
        return Outcome{r64.max_energy <= kEnergyStepTol && shrink <= kShrinkMax,
                       "max_rel_defect 64^2=" + fmt("%.4g", r64.max_energy) + " (<= 0.02) 128^2=" +
                           fmt("%.4g", r128.max_energy) + " ratio=" + fmt("%.3f", shrink) + " (<= 0.6)"};
    });
    report(3, "l4_ledger", [&] {
        const double shrink = r128.max_l4 / r64.max_l4;
        return Outcome{r64.max_l4 <= kEnergyStepTol && shrink <= kShrinkMax && r64.l4_inequality_violations == 0 &&
                           r128.l4_inequality_violations == 0,
                       "max_rel_defect 64^2=" + fmt("%.4g", r64.max_l4) + " 128^2=" + fmt("%.4g", r128.max_l4) +
                           " ratio=" + fmt("%.3f", shrink) + " (<= 0.6) inequality_violations=" +
                           std::to_string(r64.l4_inequality_violations + r128.l4_inequality_violations)};
    });
    report(4, "auxiliary_h1_bound", criterion_aux);
    report(5, "g_residual", [&] {
        const double factor = r64.max_g_residual / r128.max_g_residual;
        return Outcome{r64.max_g_residual <= kGResidualTier && factor >= kGShrinkMin,
                       "64^2=" + fmt("%.4g", r64.max_g_residual) + " (<= 1e-2) 128^2=" +
                           fmt("%.4g", r128.max_g_residual) + " factor=" + fmt("%.3f", factor) + " (>= 1.5)"};
    });
    report(6, "kappa_zero_decoupling", criterion_decoupling);
    report(7, "fixed_point_vs_direct", criterion_fixed_point);
    report(8, "uniqueness_probe", criterion_uniqueness);
    report(9, "gagliardo_nirenberg_audit", criterion_gn);
    report(10, "determinism", [&] { return criterion_determinism(out); });

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
