#pragma once

// Stokes solvers on the MAC grid with no-slip walls.
//
// The generalised problem  alpha u - visc Lap u + grad p = f,  div u = 0,
// u = 0 on the wall, is solved by preconditioned conjugate gradients on the
// pressure Schur complement S = G^T H^{-1} G (H = alpha - visc Lap). Each
// application of H^{-1} is an exact fast Helmholtz solve per velocity
// component; the preconditioner is visc I + alpha (-Lap_N)^{-1}.

#include "micropol/elliptic.hpp"
#include "micropol/grid.hpp"

namespace micropol {

struct StokesOptions {
    double tol = 1e-9;       ///< bound on both divergence and momentum residuals (discrete L2)
    int max_iterations = 0;  ///< 0 selects 20 * nx outer iterations
};

struct StokesSolveResult {
    VelocityField velocity;
    ScalarField pressure;  ///< zero mean
    int iterations = 0;
    double div_residual = 0.0;
    double mom_residual = 0.0;
};

/// alpha u - visc Lap u + grad p = f. Only interior faces of f are read.
StokesSolveResult solve_stokes(const VelocityField& f, double alpha, double visc, const StokesOptions& opts = {});

/// -Lap u + grad p = f, div u = 0, u = 0 on the wall.
StokesSolveResult stokes_stationary(const VelocityField& f, double tol = 1e-9);

/// v = scale * A^{-1} perp_grad(w). The right-hand side is assembled in
/// divergence form: the antisymmetric tensor with entries +-w is placed on
/// the nodes and differenced once, so only w itself enters.
StokesSolveResult apply_A_inv_perp(const ScalarField& w, double scale, double tol = 1e-9);

/// One implicit Euler step of  u_t - visc Lap u + grad p = f  from u.
StokesSolveResult stokes_unsteady_step(const VelocityField& u, const VelocityField& f, double dt, double visc,
                                       double tol = 1e-9);

/// Discrete Leray projection u - G phi with D G phi = D u. Wall-normal faces
/// of the input are discarded (set to zero) first.
VelocityField leray_project(const VelocityField& u);

/// Record of the logarithmic gradient bound for the Stokes solution driven
/// by div F with F = [[0, w], [-w, 0]].
struct LogGradientAudit {
    double grad_u_inf = 0.0;   ///< ||grad u||_inf
    double f_inf = 0.0;        ///< ||F||_inf
    double grad_f_q = 0.0;     ///< ||grad F||_q
    double bound = 0.0;        ///< (1 + ||F||_inf) ln(e + ||grad F||_q)
    double ratio = 0.0;        ///< grad_u_inf / bound
};

LogGradientAudit log_gradient_audit(const ScalarField& w, double q, double tol = 1e-9);

}  // namespace micropol
