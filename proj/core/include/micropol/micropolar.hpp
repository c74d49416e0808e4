#pragma once

// Time integrator for the 2D micropolar system without angular viscosity:
//
//   u_t - (nu + kappa) Lap u + u.grad u + grad pi = -2 kappa perp_grad w
//   w_t + 4 kappa w + u.grad w = 2 kappa perp_div u,   div u = 0,  u = 0 on the wall.
//
// One step advances the velocity with a semi-implicit Stokes solve (explicit
// advection and micro-rotation forcing, implicit viscosity) and then
// transports w along characteristics of the start-of-step velocity, with the
// linear damping and the vorticity source integrated exactly.

#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "micropol/grid.hpp"
#include "micropol/stokes.hpp"

namespace micropol {

struct FluidParams {
    double nu = 0.1;     ///< kinematic viscosity, > 0
    double kappa = 0.1;  ///< micro-rotation viscosity, >= 0

    [[nodiscard]] double total_viscosity() const { return nu + kappa; }
    void validate() const;
};

struct SimState {
    double t = 0.0;
    long step = 0;
    VelocityField u;
    ScalarField w;
};

/// Raised when a step would violate the Courant limit, or when the adaptive
/// step collapses below its floor.
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StepOptions {
    double tol = 1e-9;      ///< Stokes solver tolerance
    double cfl_max = 0.9;   ///< dt * ||u||_inf / h must not exceed this
};

/// Courant number dt * ||u||_inf / h.
double courant_number(const VelocityField& u, double dt);

/// Semi-Lagrangian transport of w by u over dt with exact damping and a
/// frozen vorticity source. Characteristic feet come from a midpoint
/// (second-order) backward trace and are clamped to the closed domain.
ScalarField advect_w(const ScalarField& w, const VelocityField& u, const FluidParams& params, double dt,
                     double cfl_max = 0.9);

/// Velocity update of one step (no w update).
VelocityField momentum_step(const SimState& state, const FluidParams& params, double dt,
                            const StepOptions& opts = {});

/// Navier-Stokes step with the same scheme and no micro-rotation forcing.
VelocityField navier_stokes_step(const VelocityField& u, double visc, double dt, const StepOptions& opts = {});

/// Full coupled step: momentum first, then transport, both using the
/// start-of-step velocity.
SimState step(const SimState& state, const FluidParams& params, double dt, const StepOptions& opts = {});

struct DtPolicy {
    double cfl_max = 0.9;
    double dt_floor = 1e-8;
    double dt_max = 0.0;  ///< 0 selects min(h / 4, 0.02 / (visc lambda_1)), see choose_dt
};

/// Step size for the next step: min(dt_max, cfl_max h / ||u||_inf, remaining).
/// The default cap also resolves the decay time of the slowest viscous mode,
/// lambda_1 = pi^2 (1/lx^2 + 1/ly^2), when visc > 0.
double choose_dt(const SimState& state, const DtPolicy& policy, double t_final, double visc = 0.0);

/// Called after every step with the states before and after it.
using StepObserver = std::function<void(const SimState& before, const SimState& after, double dt)>;

struct RunResult {
    SimState final_state;
    long steps = 0;
    std::vector<double> times;  ///< t after each step
};

/// Integrates to t_final. Throws StepSizeError if the step collapses.
RunResult run(const SimState& initial, const FluidParams& params, double t_final, const DtPolicy& policy,
              const StepObserver& observer = {}, double tol = 1e-9);

/// Defects of the initial data with respect to the compatibility conditions.
struct CompatibilityDefect {
    double boundary_defect = 0.0;     ///< wall L2 norm of the momentum balance at t = 0
    double divergence_l2 = 0.0;       ///< ||div u0||_{L2}
    double wall_trace_l2 = 0.0;       ///< ||u0||_{L2(wall)}
    double neumann_projection = 0.0;  ///< data defect removed by the pressure solve
    ScalarField pi0;                  ///< initial pressure (zero mean)
};

CompatibilityDefect check_compatibility(const VelocityField& u0, const ScalarField& w0, const FluidParams& params,
                                        double tol = 1e-10);

}  // namespace micropol
