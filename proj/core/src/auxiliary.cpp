#include "micropol/auxiliary.hpp"

#include "micropol/norms.hpp"
#include "micropol/stokes.hpp"

namespace micropol {

namespace {

double v_scale(const FluidParams& params) { return -2.0 * params.kappa / params.total_viscosity(); }

/// V(div(u w) - 2 kappa perp_div u) in a single Stokes solve.
VelocityField transport_terms(const VelocityField& u, const ScalarField& w, const FluidParams& params, double tol) {
    ScalarField s = flux_divergence(u, w);
    s -= (2.0 * params.kappa) * perp_divergence(u);
    return apply_A_inv_perp(s, v_scale(params), tol).velocity;
}

}  // namespace

std::pair<VelocityField, ScalarField> compute_v(const ScalarField& w, const FluidParams& params, double tol) {
    params.validate();
    StokesSolveResult r = apply_A_inv_perp(w, v_scale(params), tol);
    return {std::move(r.velocity), std::move(r.pressure)};
}

VelocityField compute_Q(const VelocityField& u, const ScalarField& w, const VelocityField& v,
                        const FluidParams& params, double tol) {
    VelocityField q = advection(u, u);
    q *= -1.0;
    if (params.kappa > 0.0) {
        q += (4.0 * params.kappa) * v;
        q += transport_terms(u, w, params, tol);
    }
    q.enforce_no_slip();
    return q;
}

AuxFields compute_aux(const SimState& state, const FluidParams& params, double tol) {
    AuxFields aux;
    auto [v, p] = compute_v(state.w, params, tol);
    aux.g = state.u - v;
    aux.g.enforce_no_slip();
    aux.q = compute_Q(state.u, state.w, v, params, tol);
    aux.v = std::move(v);
    aux.p_aux = std::move(p);
    return aux;
}

double g_residual(const AuxFields& before, const AuxFields& after, const FluidParams& params, double dt) {
    VelocityField r = after.g - before.g;
    r *= 1.0 / dt;
    r -= params.total_viscosity() * laplacian_vec(after.g);
    r -= before.q;
    return lp_norm(leray_project(r), 2.0);
}

double v_evolution_residual(const SimState& before, const VelocityField& v_before, const VelocityField& v_after,
                            const FluidParams& params, double dt, double tol) {
    VelocityField r = v_after - v_before;
    r *= 1.0 / dt;
    if (params.kappa > 0.0) {
        r += (4.0 * params.kappa) * v_before;
        r += transport_terms(before.u, before.w, params, tol);
    }
    r.enforce_no_slip();
    return lp_norm(r, 2.0);
}

double v_evolution_residual(const VelocityField& u_before, const AuxFields& before, const AuxFields& after,
                            double dt) {
    VelocityField r = after.v - before.v;
    r *= 1.0 / dt;
    r += before.q;
    r += advection(u_before, u_before);
    r.enforce_no_slip();
    return lp_norm(r, 2.0);
}

}  // namespace micropol
