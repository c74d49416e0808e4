#include "micropol/micropolar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "micropol/elliptic.hpp"
#include "micropol/norms.hpp"

namespace micropol {

void FluidParams::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("nu must be positive, got " + std::to_string(nu));
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be non-negative, got " + std::to_string(kappa));
}

double courant_number(const VelocityField& u, double dt) { return dt * u.max_abs() / u.grid().h; }

ScalarField advect_w(const ScalarField& w, const VelocityField& u, const FluidParams& params, double dt,
                     double cfl_max) {
    if (!(dt > 0.0)) throw StepSizeError("advect_w: dt must be positive");
    const double c = courant_number(u, dt);
    if (c > cfl_max)
        throw StepSizeError("advect_w: Courant number " + std::to_string(c) + " exceeds " + std::to_string(cfl_max));

    const GridSpec& g = w.grid();
    const double kappa = params.kappa;
    const double decay = std::exp(-4.0 * kappa * dt);
    const double gain = 0.5 * (1.0 - decay);
    ScalarField source;
    if (kappa > 0.0) source = perp_divergence(u);

    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i);
            const double y = g.yc(j);
            const Vec2 v1 = sample_velocity(u, x, y);
            const double xm = std::clamp(x - 0.5 * dt * v1.x, 0.0, g.lx);
            const double ym = std::clamp(y - 0.5 * dt * v1.y, 0.0, g.ly);
            const Vec2 v2 = sample_velocity(u, xm, ym);
            const double xf = std::clamp(x - dt * v2.x, 0.0, g.lx);
            const double yf = std::clamp(y - dt * v2.y, 0.0, g.ly);
            double value = decay * sample_scalar(w, xf, yf);
            if (kappa > 0.0) value += gain * source(i, j);
            out(i, j) = value;
        }
    }
    return out;
}

namespace {

VelocityField momentum_update(const VelocityField& u, const ScalarField* w, double kappa, double visc, double dt,
                              const StepOptions& opts) {
    if (!(dt > 0.0)) throw StepSizeError("momentum step: dt must be positive");
    const double c = courant_number(u, dt);
    if (c > opts.cfl_max)
        throw StepSizeError("momentum step: Courant number " + std::to_string(c) + " exceeds " +
                            std::to_string(opts.cfl_max));
    VelocityField forcing = advection(u, u);
    forcing *= -1.0;
    if (w != nullptr && kappa > 0.0) forcing -= (2.0 * kappa) * perp_gradient(*w);
    VelocityField next = stokes_unsteady_step(u, forcing, dt, visc, opts.tol).velocity;
    next.enforce_no_slip();
    return next;
}

}  // namespace

VelocityField momentum_step(const SimState& state, const FluidParams& params, double dt, const StepOptions& opts) {
    return momentum_update(state.u, &state.w, params.kappa, params.total_viscosity(), dt, opts);
}

VelocityField navier_stokes_step(const VelocityField& u, double visc, double dt, const StepOptions& opts) {
    return momentum_update(u, nullptr, 0.0, visc, dt, opts);
}

SimState step(const SimState& state, const FluidParams& params, double dt, const StepOptions& opts) {
    SimState next;
    next.u = momentum_step(state, params, dt, opts);
    next.w = advect_w(state.w, state.u, params, dt, opts.cfl_max);
    next.t = state.t + dt;
    next.step = state.step + 1;
    return next;
}

double choose_dt(const SimState& state, const DtPolicy& policy, double t_final, double visc) {
    const GridSpec& g = state.u.grid();
    const double h = g.h;
    double dt = policy.dt_max;
    if (!(dt > 0.0)) {
        dt = 0.25 * h;
        if (visc > 0.0) {
            const double pi = std::acos(-1.0);
            const double lambda1 = pi * pi * (1.0 / (g.lx * g.lx) + 1.0 / (g.ly * g.ly));
            dt = std::min(dt, 0.02 / (visc * lambda1));
        }
    }
    const double umax = state.u.max_abs();
    if (umax > 0.0) dt = std::min(dt, policy.cfl_max * h / umax);
    const double remaining = t_final - state.t;
    if (remaining < dt * (1.0 + 1e-12)) dt = remaining;
    return dt;
}

RunResult run(const SimState& initial, const FluidParams& params, double t_final, const DtPolicy& policy,
              const StepObserver& observer, double tol) {
    params.validate();
    RunResult res;
    res.final_state = initial;
    StepOptions opts;
    opts.tol = tol;
    opts.cfl_max = policy.cfl_max;
    const double t_eps = 1e-12 * std::max(1.0, std::abs(t_final));
    while (res.final_state.t < t_final - t_eps) {
        const SimState& cur = res.final_state;
        const double dt = choose_dt(cur, policy, t_final, params.total_viscosity());
        const bool last = t_final - cur.t <= dt * (1.0 + 1e-12);
        if (dt < policy.dt_floor && !last)
            throw StepSizeError("adaptive step " + std::to_string(dt) + " fell below dt_floor " +
                                std::to_string(policy.dt_floor) + " at t = " + std::to_string(cur.t));
        SimState next = step(cur, params, dt, opts);
        if (last) next.t = t_final;
        if (!next.u.all_finite() || !next.w.all_finite())
            throw StepSizeError("non-finite state at t = " + std::to_string(next.t));
        if (observer) observer(cur, next, dt);
        res.times.push_back(next.t);
        ++res.steps;
        res.final_state = std::move(next);
    }
    return res;
}

CompatibilityDefect check_compatibility(const VelocityField& u0, const ScalarField& w0, const FluidParams& params,
                                        double tol) {
    const GridSpec& g = u0.grid();
    const double h = g.h;
    const double visc = params.total_viscosity();
    const double kappa = params.kappa;

    // Momentum balance at t = 0 without the pressure: m = visc Lap u0 - 2 kappa perp_grad w0 - N(u0).
    VelocityField m = visc * laplacian_vec(u0);
    m -= (2.0 * kappa) * perp_gradient(w0);
    m -= advection(u0, u0);

    NeumannData flux = NeumannData::zero(g);
    for (int j = 0; j < g.ny; ++j) {
        flux.left[j] = -m.ux(0, j);
        flux.right[j] = m.ux(g.nx, j);
    }
    for (int i = 0; i < g.nx; ++i) {
        flux.bottom[i] = -m.uy(i, 0);
        flux.top[i] = m.uy(i, g.ny);
    }
    EllipticOptions eo;
    eo.tol = tol;
    VelocityField nonlinear = advection(u0, u0);
    EllipticSolveResult pr = poisson_neumann(divergence(nonlinear), flux, eo);

    CompatibilityDefect out;
    out.neumann_projection = pr.projection;
    out.pi0 = pr.solution;
    const ScalarField& p = out.pi0;

    // Residual r = grad pi0 - m; wall-normal gradients are reconstructed
    // one-sidedly from the interior cells, tangential residuals extrapolated.
    VelocityField r = gradient(p);
    r -= m;
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const double dl = (-2.0 * p(0, j) + 3.0 * p(1, j) - p(2, j)) / h;
        const double dr = (2.0 * p(g.nx - 1, j) - 3.0 * p(g.nx - 2, j) + p(g.nx - 3, j)) / h;
        const double rl = dl - m.ux(0, j);
        const double rr = dr - m.ux(g.nx, j);
        sum += (rl * rl + rr * rr) * h;
    }
    for (int i = 0; i < g.nx; ++i) {
        const double db = (-2.0 * p(i, 0) + 3.0 * p(i, 1) - p(i, 2)) / h;
        const double dt = (2.0 * p(i, g.ny - 1) - 3.0 * p(i, g.ny - 2) + p(i, g.ny - 3)) / h;
        const double rb = db - m.uy(i, 0);
        const double rt = dt - m.uy(i, g.ny);
        sum += (rb * rb + rt * rt) * h;
    }
    for (int i = 1; i < g.nx; ++i) {
        const double rb = 1.5 * r.ux(i, 0) - 0.5 * r.ux(i, 1);
        const double rt = 1.5 * r.ux(i, g.ny - 1) - 0.5 * r.ux(i, g.ny - 2);
        sum += (rb * rb + rt * rt) * h;
    }
    for (int j = 1; j < g.ny; ++j) {
        const double rl = 1.5 * r.uy(0, j) - 0.5 * r.uy(1, j);
        const double rr = 1.5 * r.uy(g.nx - 1, j) - 0.5 * r.uy(g.nx - 2, j);
        sum += (rl * rl + rr * rr) * h;
    }
    out.boundary_defect = std::sqrt(sum);
    out.divergence_l2 = lp_norm(divergence(u0), 2.0);

    // Wall trace: normal components on the wall faces, tangential components
    // extrapolated to the wall (zero by construction for no-slip fields).
    double trace = 0.0;
    for (int j = 0; j < g.ny; ++j) trace += (u0.ux(0, j) * u0.ux(0, j) + u0.ux(g.nx, j) * u0.ux(g.nx, j)) * h;
    for (int i = 0; i < g.nx; ++i) trace += (u0.uy(i, 0) * u0.uy(i, 0) + u0.uy(i, g.ny) * u0.uy(i, g.ny)) * h;
    if (!u0.no_slip()) {
        for (int i = 0; i <= g.nx; ++i) {
            const double wgt = (i == 0 || i == g.nx) ? 0.5 * h : h;
            const double b = 1.5 * u0.ux(i, 0) - 0.5 * u0.ux(i, 1);
            const double t = 1.5 * u0.ux(i, g.ny - 1) - 0.5 * u0.ux(i, g.ny - 2);
            trace += (b * b + t * t) * wgt;
        }
        for (int j = 0; j <= g.ny; ++j) {
            const double wgt = (j == 0 || j == g.ny) ? 0.5 * h : h;
            const double l = 1.5 * u0.uy(0, j) - 0.5 * u0.uy(1, j);
            const double rr = 1.5 * u0.uy(g.nx - 1, j) - 0.5 * u0.uy(g.nx - 2, j);
            trace += (l * l + rr * rr) * wgt;
        }
    }
    out.wall_trace_l2 = std::sqrt(trace);
    return out;
}

}  // namespace micropol
