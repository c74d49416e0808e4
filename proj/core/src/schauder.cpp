#include "micropol/schauder.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "micropol/norms.hpp"
#include "micropol/stokes.hpp"

namespace micropol {

std::vector<double> mollifier_weights(const MollifierSpec& spec, double h) {
    const int radius = static_cast<int>(std::floor(4.0 * spec.epsilon / h + 1e-12));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double x = k * h / spec.epsilon;
        w[static_cast<std::size_t>(k + radius)] = std::exp(-0.5 * x * x);
        sum += w[static_cast<std::size_t>(k + radius)];
    }
    for (double& x : w) x /= sum;
    return w;
}

namespace {

enum class Sampling { Cell, Face };

/// Index into [0, n) of the even reflection of m: about the half-sample
/// point for cell data, about the end samples for face data (n samples).
int reflect(int m, int n, Sampling s) {
    if (s == Sampling::Cell) {
        const int period = 2 * n;
        m %= period;
        if (m < 0) m += period;
        return m < n ? m : period - 1 - m;
    }
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    m %= period;
    if (m < 0) m += period;
    return m < n ? m : period - m;
}

/// Separable convolution of an nx-by-ny row-major array.
void smooth(std::vector<double>& data, int nx, int ny, Sampling sx, Sampling sy, const std::vector<double>& w) {
    const int r = static_cast<int>(w.size() / 2);
    std::vector<double> tmp(data.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double s = 0.0;
            for (int k = -r; k <= r; ++k) s += w[static_cast<std::size_t>(k + r)] * data[static_cast<std::size_t>(j) * nx + reflect(i + k, nx, sx)];
            tmp[static_cast<std::size_t>(j) * nx + i] = s;
        }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double s = 0.0;
            for (int k = -r; k <= r; ++k) s += w[static_cast<std::size_t>(k + r)] * tmp[static_cast<std::size_t>(reflect(j + k, ny, sy)) * nx + i];
            data[static_cast<std::size_t>(j) * nx + i] = s;
        }
}

bool active(const MollifierSpec& spec, double h) {
    if (spec.epsilon >= h * (1.0 - 1e-12)) return true;
    std::clog << "warning: mollifier width " << spec.epsilon << " below cell size " << h << "; identity used\n";
    return false;
}

}  // namespace

ScalarField mollify(const ScalarField& f, const MollifierSpec& spec) {
    const GridSpec& g = f.grid();
    if (!active(spec, g.h)) return f;
    ScalarField out = f;
    smooth(out.data(), g.nx, g.ny, Sampling::Cell, Sampling::Cell, mollifier_weights(spec, g.h));
    return out;
}

VelocityField mollify(const VelocityField& u, const MollifierSpec& spec) {
    const GridSpec& g = u.grid();
    if (!active(spec, g.h)) return u;
    const std::vector<double> w = mollifier_weights(spec, g.h);
    VelocityField out = u;
    smooth(out.ux_data(), g.nx + 1, g.ny, Sampling::Face, Sampling::Cell, w);
    smooth(out.uy_data(), g.nx, g.ny + 1, Sampling::Cell, Sampling::Face, w);
    VelocityField projected = leray_project(out);
    projected.enforce_no_slip();
    return projected;
}

std::vector<ScalarField> solve_transport_linearized(const ScalarField& w0, const std::vector<VelocityField>& v,
                                                    const FluidParams& params, double dt, double cfl_max) {
    std::vector<ScalarField> w;
    w.reserve(v.size() + 1);
    w.push_back(w0);
    for (const VelocityField& vn : v) w.push_back(advect_w(w.back(), vn, params, dt, cfl_max));
    return w;
}

std::vector<VelocityField> solve_ns_linearized(const VelocityField& u0, const std::vector<VelocityField>& v,
                                               const std::vector<ScalarField>& w, const FluidParams& params,
                                               double dt, double tol) {
    std::vector<VelocityField> u;
    u.reserve(v.size() + 1);
    u.push_back(u0);
    for (std::size_t n = 0; n < v.size(); ++n) {
        VelocityField forcing = advection(v[n], u.back());
        forcing *= -1.0;
        if (params.kappa > 0.0) forcing -= (2.0 * params.kappa) * perp_gradient(w[n]);
        VelocityField next = stokes_unsteady_step(u.back(), forcing, dt, params.total_viscosity(), tol).velocity;
        next.enforce_no_slip();
        u.push_back(std::move(next));
    }
    return u;
}

double sup_l2_distance(const std::vector<VelocityField>& a, const std::vector<VelocityField>& b) {
    double d = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) d = std::max(d, lp_norm(a[k] - b[k], 2.0));
    return d;
}

namespace {

int level_count(double t_final, double dt) {
    return std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));
}

}  // namespace

FixedPointResult fixed_point_solve(const VelocityField& u0, const ScalarField& w0, const FluidParams& params,
                                   double t_final, const FixedPointOptions& opts) {
    params.validate();
    const GridSpec& g = u0.grid();
    const int steps = level_count(t_final, opts.dt > 0.0 ? opts.dt : 0.25 * g.h);
    const double dt = t_final / steps;
    const MollifierSpec spec{opts.epsilon > 0.0 ? opts.epsilon : g.h};

    std::vector<VelocityField> v(static_cast<std::size_t>(steps) + 1,
                                 opts.guess == InitialGuess::Zero ? VelocityField(g) : u0);
    FixedPointResult res;
    res.trajectory.dt = dt;
    FixedPointReport& rep = res.report;
    for (int k = 1; k <= opts.max_iterations; ++k) {
        std::vector<VelocityField> v_eps;
        v_eps.reserve(static_cast<std::size_t>(steps));
        for (int n = 0; n < steps; ++n) v_eps.push_back(mollify(v[static_cast<std::size_t>(n)], spec));
        std::vector<ScalarField> w = solve_transport_linearized(w0, v_eps, params, dt);
        std::vector<VelocityField> u = solve_ns_linearized(u0, v_eps, w, params, dt, opts.solver_tol);
        const double dist = sup_l2_distance(u, v);
        rep.distances.push_back(dist);
        rep.iterations = k;
        v = u;
        res.trajectory.u = std::move(u);
        res.trajectory.w = std::move(w);
        if (dist <= opts.tol) {
            rep.converged = true;
            break;
        }
    }

    SmallnessCheck& sc = rep.r0_check;
    const double eu = inner(u0, u0);
    const double ew = inner(w0, w0);
    sc.r0 = 10.0 * (eu + ew);
    const double denom = ew + sc.r0;
    for (std::size_t n = 1; n < res.trajectory.u.size(); ++n) {
        const double t = static_cast<double>(n) * dt;
        if (denom > 0.0) sc.c_fit = std::max(sc.c_fit, (inner(res.trajectory.u[n], res.trajectory.u[n]) - eu) / (t * denom));
    }
    sc.lhs = eu + sc.c_fit * t_final * denom;
    sc.satisfied = sc.lhs <= sc.r0;
    if (!sc.satisfied)
        std::clog << "warning: smallness condition not met (" << sc.lhs << " > R0 = " << sc.r0 << ")\n";
    return res;
}

Trajectory direct_trajectory(const VelocityField& u0, const ScalarField& w0, const FluidParams& params,
                             double t_final, double dt, double tol) {
    const int steps = level_count(t_final, dt);
    Trajectory tr;
    tr.dt = t_final / steps;
    SimState s;
    s.u = u0;
    s.w = w0;
    tr.u.push_back(s.u);
    tr.w.push_back(s.w);
    StepOptions opts;
    opts.tol = tol;
    for (int n = 0; n < steps; ++n) {
        s = step(s, params, tr.dt, opts);
        tr.u.push_back(s.u);
        tr.w.push_back(s.w);
    }
    return tr;
}

UniquenessReport uniqueness_probe(const VelocityField& u0, const ScalarField& w0, double delta,
                                  const FluidParams& params, double t_final, double dt, double tol) {
    if (delta < 0.0) throw std::invalid_argument("uniqueness_probe: delta must be non-negative");
    const GridSpec& g = w0.grid();
    const double pi = std::acos(-1.0);
    ScalarField w1 = w0;
    if (delta > 0.0)
        w1 += delta * ScalarField::sample(g, [&](double x, double y) {
            return std::sin(2.0 * pi * x / g.lx) * std::sin(pi * y / g.ly);
        });
    const Trajectory base = direct_trajectory(u0, w0, params, t_final, dt, tol);
    const Trajectory pert = direct_trajectory(u0, w1, params, t_final, dt, tol);

    UniquenessReport rep;
    double exponent = 0.0;
    for (std::size_t n = 0; n < base.levels(); ++n) {
        const VelocityField du = pert.u[n] - base.u[n];
        const ScalarField dw = pert.w[n] - base.w[n];
        rep.t.push_back(static_cast<double>(n) * base.dt);
        rep.distance.push_back(inner(du, du) + inner(dw, dw));
        rep.exponent.push_back(exponent);
        const double gu = sobolev_seminorm(base.u[n], 1, 2.0);
        const double gw = sobolev_seminorm(base.w[n], 1, 4.0);
        exponent += (1.0 + gu * gu + gw * gw) * base.dt;
    }
    const double d0 = rep.distance.front();
    for (std::size_t n = 0; n + 1 < rep.distance.size(); ++n) {
        const double a = rep.distance[n];
        const double b = rep.distance[n + 1];
        const double de = rep.exponent[n + 1] - rep.exponent[n];
        if (a > 0.0 && b > 0.0 && de > 0.0) rep.c_fit = std::max(rep.c_fit, std::log(b / a) / de);
    }
    for (std::size_t n = 0; n < rep.distance.size(); ++n) {
        const double env = std::exp(rep.c_fit * rep.exponent[n]) * d0;
        if (rep.distance[n] > env * (1.0 + 1e-9)) ++rep.violations;
    }
    rep.growth = d0 > 0.0 ? rep.distance.back() / d0 : 0.0;
    return rep;
}

}  // namespace micropol
