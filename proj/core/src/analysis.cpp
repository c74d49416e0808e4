#include "micropol/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace micropol {

const std::vector<std::string>& DiagnosticsRecord::field_names() {
    static const std::vector<std::string> names{
        "t",          "l2_u",          "h1_u",          "l2_w",          "l4_w",
        "linf_w",     "l4_grad_w",     "h1_v",          "h1_g",          "l2_lap_g",
        "energy_lhs", "energy_rhs",    "energy_defect", "l4_ledger_lhs", "l4_ledger_rhs",
        "l4_ledger_defect", "g_residual", "vt_residual", "gronwall_envelope_a1", "gronwall_envelope_a2"};
    return names;
}

std::vector<double> DiagnosticsRecord::values() const {
    return {t,          l2_u,          h1_u,          l2_w,          l4_w,
            linf_w,     l4_grad_w,     h1_v,          h1_g,          l2_lap_g,
            energy_lhs, energy_rhs,    energy_defect, l4_ledger_lhs, l4_ledger_rhs,
            l4_ledger_defect, g_residual, vt_residual, gronwall_envelope_a1, gronwall_envelope_a2};
}

namespace {

ScalarField cube(const ScalarField& w) {
    ScalarField out(w.grid());
    for (std::size_t k = 0; k < out.data().size(); ++k) {
        const double x = w.data()[k];
        out.data()[k] = x * x * x;
    }
    return out;
}

double sum_pow4(const ScalarField& w) {
    double s = 0.0;
    for (double x : w.data()) s += x * x * x * x;
    return s * w.grid().cell_area();
}

double max_gradient_magnitude(const VelocityField& u) {
    const ScalarField a = ux_at_cells(u);
    const ScalarField b = uy_at_cells(u);
    const ScalarField ax = ddx(a), ay = ddy(a), bx = ddx(b), by = ddy(b);
    double m = 0.0;
    for (std::size_t k = 0; k < ax.data().size(); ++k) {
        const double s = ax.data()[k] * ax.data()[k] + ay.data()[k] * ay.data()[k] + bx.data()[k] * bx.data()[k] +
                         by.data()[k] * by.data()[k];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

}  // namespace

LedgerTerms energy_ledger(const SimState& before, const SimState& after, const FluidParams& params, double dt) {
    const double kappa = params.kappa;
    const double e0 = 0.5 * (inner(before.u, before.u) + inner(before.w, before.w));
    const double e1 = 0.5 * (inner(after.u, after.u) + inner(after.w, after.w));
    const double rate = (e1 - e0) / dt;
    const double grad = sobolev_seminorm(after.u, 1, 2.0);
    const double dissipation = params.total_viscosity() * grad * grad;
    const double damping = 2.0 * kappa * (inner(before.w, before.w) + inner(after.w, after.w));

    LedgerTerms out;
    out.lhs = rate + dissipation + damping;
    if (kappa > 0.0) {
        const ScalarField w_mid = 0.5 * (before.w + after.w);
        out.rhs = 2.0 * kappa * (inner(perp_divergence(after.u), before.w) + inner(perp_divergence(before.u), w_mid));
    }
    out.defect = out.lhs - out.rhs;
    out.scale = std::abs(rate) + dissipation + damping;
    return out;
}

LedgerTerms l4_ledger(const SimState& before, const SimState& after, const FluidParams& params, double dt) {
    const double kappa = params.kappa;
    const double m0 = sum_pow4(before.w);
    const double m1 = sum_pow4(after.w);
    const double rate = (m1 - m0) / (4.0 * dt);
    const double damping = 2.0 * kappa * (m0 + m1);

    LedgerTerms out;
    out.lhs = rate + damping;
    if (kappa > 0.0) {
        ScalarField cubic = cube(before.w);
        cubic += cube(after.w);
        out.rhs = kappa * inner(perp_divergence(before.u), cubic);
    }
    out.defect = out.lhs - out.rhs;
    out.scale = std::abs(rate) + damping;
    return out;
}

StateSample sample_state(const SimState& state, const AuxFields& aux) {
    StateSample s;
    s.t = state.t;
    s.l2_u = lp_norm(state.u, 2.0);
    s.grad_u_l2 = sobolev_seminorm(state.u, 1, 2.0);
    s.grad_u_inf = max_gradient_magnitude(state.u);
    const ScalarField curl_u = perp_divergence(state.u);
    s.grad_curl_u_4 = derivative_norm(curl_u, 1, 4.0);
    for (std::size_t k = 0; k < kLedgerExponents.size(); ++k) {
        s.w_q[k] = lp_norm(state.w, kLedgerExponents[k]);
        s.curl_q[k] = lp_norm(curl_u, kLedgerExponents[k]);
    }
    s.grad_w_4 = sobolev_seminorm(state.w, 1, 4.0);
    s.grad_g_l2 = sobolev_seminorm(aux.g, 1, 2.0);
    s.lap_g_l2 = lp_norm(laplacian_vec(aux.g), 2.0);
    s.g_w2q = lp_norm(aux.g, 4.0) + sobolev_seminorm(aux.g, 1, 4.0) + sobolev_seminorm(aux.g, 2, 4.0);
    return s;
}

LpLedgerReport lp_linf_ledger(const std::vector<StateSample>& samples, const FluidParams& params, int q_index,
                              double rel_tol) {
    LpLedgerReport rep;
    rep.q = kLedgerExponents.at(static_cast<std::size_t>(q_index));
    if (samples.empty()) return rep;
    const auto qi = static_cast<std::size_t>(q_index);
    double majorant = samples.front().w_q[qi];
    rep.max_excess = -INFINITY;
    for (std::size_t n = 0; n + 1 < samples.size(); ++n) {
        const StateSample& a = samples[n];
        const StateSample& b = samples[n + 1];
        const double dt = b.t - a.t;
        const double decay = std::exp(-4.0 * params.kappa * dt);
        const double gain = 0.5 * (1.0 - decay) * a.curl_q[qi];
        const double bound = decay * a.w_q[qi] + gain;
        const double excess = (b.w_q[qi] - bound) / std::max(a.w_q[qi], 1e-300);
        rep.max_excess = std::max(rep.max_excess, excess);
        if (excess > rel_tol) ++rep.violations;
        majorant = decay * majorant + gain;
        if (b.w_q[qi] > majorant * (1.0 + rel_tol) + 1e-300) ++rep.majorant_violations;
        ++rep.steps;
    }
    if (rep.steps == 0) rep.max_excess = 0.0;
    rep.final_majorant = majorant;
    return rep;
}

GradWLedgerReport gradw_ledger(const std::vector<StateSample>& samples, const FluidParams& params, double rel_tol) {
    GradWLedgerReport rep;
    if (samples.empty()) return rep;
    const double kappa = params.kappa;
    rep.max_excess = -INFINITY;
    std::vector<double> phi_dt;
    for (std::size_t n = 0; n + 1 < samples.size(); ++n) {
        const StateSample& a = samples[n];
        const StateSample& b = samples[n + 1];
        const double dt = b.t - a.t;
        const double rate = (b.grad_w_4 - a.grad_w_4) / dt;
        const double lhs = rate + 4.0 * kappa * a.grad_w_4;
        const double rhs = a.grad_u_inf * a.grad_w_4 + 2.0 * kappa * a.grad_curl_u_4;
        const double scale = std::abs(rate) + 4.0 * kappa * a.grad_w_4 + rhs;
        const double excess = scale > 0.0 ? (lhs - rhs) / scale : 0.0;
        rep.max_excess = std::max(rep.max_excess, excess);
        if (excess > rel_tol) ++rep.violations;

        const double phi = (1.0 + a.w_q[3]) * (1.0 + a.g_w2q);
        const double y0 = std::log(std::exp(1.0) + a.grad_w_4);
        const double y1 = std::log(std::exp(1.0) + b.grad_w_4);
        rep.fitted_rate = std::max(rep.fitted_rate, (std::log(y1) - std::log(y0)) / (dt * phi));
        phi_dt.push_back(phi * dt);
        rep.max_grad_w = std::max({rep.max_grad_w, a.grad_w_4, b.grad_w_4});
        ++rep.steps;
    }
    if (rep.steps == 0) rep.max_excess = 0.0;

    const double y_init = std::log(std::exp(1.0) + samples.front().grad_w_4);
    double integral = 0.0;
    rep.envelope.push_back(samples.front().grad_w_4);
    for (std::size_t n = 1; n < samples.size(); ++n) {
        integral += phi_dt[n - 1];
        const double env = std::exp(y_init * std::exp(rep.fitted_rate * integral)) - std::exp(1.0);
        rep.envelope.push_back(env);
        if (samples[n].grad_w_4 > env * (1.0 + rel_tol) + 1e-12) ++rep.envelope_violations;
    }
    return rep;
}

double energy_growth_constant(const FluidParams& params) {
    const double k = params.kappa;
    return std::max(0.0, 8.0 * k * k / params.total_viscosity() - 8.0 * k);
}

namespace {

double a2_quantity(const StateSample& s) { return s.grad_g_l2 * s.grad_g_l2 + s.w_q[1] * s.w_q[1]; }

double a2_dissipation(const StateSample& s, const FluidParams& params) {
    return params.total_viscosity() * s.lap_g_l2 * s.lap_g_l2 + 8.0 * params.kappa * s.w_q[1] * s.w_q[1];
}

double a2_weight(const StateSample& s) { return 1.0 + s.l2_u * s.l2_u * s.grad_u_l2 * s.grad_u_l2; }

double a2_step_rate(const StateSample& a, const StateSample& b, const FluidParams& params) {
    const double dt = b.t - a.t;
    const double z0 = a2_quantity(a);
    if (!(z0 > 0.0) || !(dt > 0.0)) return 0.0;
    const double num = (a2_quantity(b) - z0) / dt + a2_dissipation(b, params);
    return num / (a2_weight(a) * z0);
}

}  // namespace

double fit_a2_rate(const std::vector<StateSample>& samples, const FluidParams& params) {
    double c = 0.0;
    for (std::size_t n = 0; n + 1 < samples.size(); ++n)
        c = std::max(c, a2_step_rate(samples[n], samples[n + 1], params));
    return c;
}

GronwallReport gronwall_envelopes(const std::vector<StateSample>& samples, const FluidParams& params,
                                  const GronwallConstants& constants) {
    GronwallReport rep;
    if (samples.empty()) return rep;
    const double e0 = samples.front().l2_u * samples.front().l2_u + samples.front().w_q[0] * samples.front().w_q[0];
    const double z0 = a2_quantity(samples.front());
    double dissipated = 0.0;
    double exponent = 0.0;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const StateSample& s = samples[n];
        if (n > 0) {
            const double dt = s.t - samples[n - 1].t;
            dissipated += a2_dissipation(s, params) * dt;
            exponent += a2_weight(samples[n - 1]) * dt;
        }
        const double energy = s.l2_u * s.l2_u + s.w_q[0] * s.w_q[0];
        const double env1 = std::exp(constants.c_a1 * (s.t - samples.front().t)) * e0;
        const double q2 = a2_quantity(s) + dissipated;
        const double env2 = z0 * std::exp(constants.c_a2 * exponent);
        rep.t.push_back(s.t);
        rep.energy.push_back(energy);
        rep.envelope_a1.push_back(env1);
        rep.a2_quantity.push_back(q2);
        rep.envelope_a2.push_back(env2);
        if (energy > env1 * (1.0 + constants.tol) + 1e-300) ++rep.violations_a1;
        if (q2 > env2 * (1.0 + constants.tol) + 1e-300) ++rep.violations_a2;
    }
    return rep;
}

DiagnosticsEngine::DiagnosticsEngine(const SimState& initial, const FluidParams& params, double tol)
    : params_(params), tol_(tol), aux_(compute_aux(initial, params, tol)) {
    samples_.push_back(sample_state(initial, aux_));
    const StateSample& s = samples_.back();
    energy0_ = s.l2_u * s.l2_u + s.w_q[0] * s.w_q[0];
    z0_ = a2_quantity(s);
    initial_record_ = record_for(initial, aux_, s);
}

DiagnosticsRecord DiagnosticsEngine::record_for(const SimState& state, const AuxFields& aux,
                                                const StateSample& s) const {
    DiagnosticsRecord r;
    r.t = state.t;
    r.l2_u = s.l2_u;
    r.h1_u = std::sqrt(s.l2_u * s.l2_u + s.grad_u_l2 * s.grad_u_l2);
    r.l2_w = s.w_q[0];
    r.l4_w = s.w_q[1];
    r.linf_w = s.w_q[3];
    r.l4_grad_w = s.grad_w_4;
    r.h1_v = h1_norm(aux.v);
    r.h1_g = std::sqrt(lp_norm(aux.g, 2.0) * lp_norm(aux.g, 2.0) + s.grad_g_l2 * s.grad_g_l2);
    r.l2_lap_g = s.lap_g_l2;
    r.gronwall_envelope_a1 = energy0_ * std::exp(energy_growth_constant(params_) * state.t);
    r.gronwall_envelope_a2 = z0_ * std::exp(a2_rate_ * a2_exponent_);
    return r;
}

DiagnosticsRecord DiagnosticsEngine::observe(const SimState& before, const SimState& after, double dt) {
    AuxFields next = compute_aux(after, params_, tol_);
    const StateSample& prev = samples_.back();
    StateSample s = sample_state(after, next);
    a2_rate_ = std::max(a2_rate_, a2_step_rate(prev, s, params_));
    a2_exponent_ += a2_weight(prev) * dt;

    DiagnosticsRecord r = record_for(after, next, s);
    energy_ = energy_ledger(before, after, params_, dt);
    r.energy_lhs = energy_.lhs;
    r.energy_rhs = energy_.rhs;
    r.energy_defect = energy_.defect;
    l4_ = l4_ledger(before, after, params_, dt);
    r.l4_ledger_lhs = l4_.lhs;
    r.l4_ledger_rhs = l4_.rhs;
    r.l4_ledger_defect = l4_.defect;
    r.g_residual = g_residual(aux_, next, params_, dt);
    r.vt_residual = v_evolution_residual(before.u, aux_, next, dt);

    samples_.push_back(s);
    aux_ = std::move(next);
    return r;
}

std::vector<ScalarField> band_limited_ensemble(const GridSpec& g, int count, int max_mode, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double pi = std::acos(-1.0);
    std::vector<ScalarField> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<double> sx(static_cast<std::size_t>(max_mode * g.nx));
    std::vector<double> sy(static_cast<std::size_t>(max_mode * g.ny));
    for (int k = 1; k <= max_mode; ++k) {
        for (int i = 0; i < g.nx; ++i) sx[(k - 1) * g.nx + i] = std::sin(k * pi * g.xc(i) / g.lx);
        for (int j = 0; j < g.ny; ++j) sy[(k - 1) * g.ny + j] = std::sin(k * pi * g.yc(j) / g.ly);
    }
    for (int n = 0; n < count; ++n) {
        ScalarField f(g);
        for (int k = 1; k <= max_mode; ++k) {
            for (int l = 1; l <= max_mode; ++l) {
                const double a = normal(rng) / (k * k + l * l);
                for (int j = 0; j < g.ny; ++j)
                    for (int i = 0; i < g.nx; ++i) f(i, j) += a * sx[(k - 1) * g.nx + i] * sy[(l - 1) * g.ny + j];
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::array<double, 4> gn_ratios(const ScalarField& f) {
    const double f2 = lp_norm(f, 2.0);
    const double f4 = lp_norm(f, 4.0);
    const double finf = lp_norm(f, INFINITY);
    const double d1 = derivative_norm(f, 1, 2.0);
    const double d1_4 = derivative_norm(f, 1, 4.0);
    const double d2 = derivative_norm(f, 2, 2.0);
    const double d3 = derivative_norm(f, 3, 2.0);
    return {f4 / (std::sqrt(f2 * d1) + f2), d1_4 / (std::pow(f2, 0.25) * std::pow(d2, 0.75) + f2),
            finf / (std::sqrt(f2 * d2) + f2), finf / (std::pow(f2, 2.0 / 3.0) * std::cbrt(d3) + f2)};
}

std::vector<GnAuditRow> gn_audit(const std::vector<ScalarField>& ensemble) {
    std::vector<GnAuditRow> rows(4);
    for (int k = 0; k < 4; ++k) rows[k].item = k + 1;
    for (const ScalarField& f : ensemble) {
        const auto r = gn_ratios(f);
        for (int k = 0; k < 4; ++k) {
            rows[k].max_ratio = std::max(rows[k].max_ratio, r[k]);
            rows[k].mean_ratio += r[k];
        }
    }
    if (!ensemble.empty())
        for (auto& row : rows) row.mean_ratio /= static_cast<double>(ensemble.size());
    return rows;
}

}  // namespace micropol
