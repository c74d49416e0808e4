#pragma once

// Auxiliary velocity v, shifted field g and the source Q.
//
// With the operator V(s) = -(2 kappa / (nu + kappa)) A^{-1} perp_grad(s)
// (A the Stokes operator -Lap with no-slip walls):
//
//   v = V(w),   g = u - v,
//   Q = -u.grad u + 4 kappa v + V(div(u w)) - 2 kappa V(perp_div u),
//
// so that g_t - (nu + kappa) Lap g + grad p = Q and
// v_t + 4 kappa v + V(div(u w)) - 2 kappa V(perp_div u) = 0.
// Since -(nu + kappa) Lap v + grad pi = -2 kappa perp_grad w, the shift that
// cancels the micro-rotation forcing is u - v.

#include <utility>

#include "micropol/grid.hpp"
#include "micropol/micropolar.hpp"

namespace micropol {

struct AuxFields {
    VelocityField v;
    VelocityField g;
    VelocityField q;
    ScalarField p_aux;  ///< pressure of the stationary Stokes problem for v
};

/// v = V(w) and its Stokes pressure. kappa = 0 gives v = 0.
std::pair<VelocityField, ScalarField> compute_v(const ScalarField& w, const FluidParams& params, double tol = 1e-9);

/// Q for the given (u, w) and v = V(w).
VelocityField compute_Q(const VelocityField& u, const ScalarField& w, const VelocityField& v,
                        const FluidParams& params, double tol = 1e-9);

/// v, g and Q of one state.
AuxFields compute_aux(const SimState& state, const FluidParams& params, double tol = 1e-9);

/// L2 norm of the Leray-projected residual
///   (g1 - g0)/dt - (nu + kappa) Lap g1 - Q0.
double g_residual(const AuxFields& before, const AuxFields& after, const FluidParams& params, double dt);

/// L2 norm of (v1 - v0)/dt + 4 kappa v0 + V(div(u0 w0)) - 2 kappa V(perp_div u0),
/// everything frozen at the start of the step.
double v_evolution_residual(const SimState& before, const VelocityField& v_before, const VelocityField& v_after,
                            const FluidParams& params, double dt, double tol = 1e-9);

/// Same residual reusing the Q already stored with the start-of-step fields.
double v_evolution_residual(const VelocityField& u_before, const AuxFields& before, const AuxFields& after,
                            double dt);

}  // namespace micropol
