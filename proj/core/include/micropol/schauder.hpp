#pragma once

// Constructive existence machinery: mollification, the linearised
// transport and Navier-Stokes solves that define the iteration map
// F(v) = u, Picard iteration of F, and a stability probe for the difference
// of two solutions.

#include <cstdint>
#include <vector>

#include "micropol/grid.hpp"
#include "micropol/micropolar.hpp"

namespace micropol {

/// Discrete Gaussian of standard deviation epsilon, truncated at 4 epsilon,
/// renormalised, applied separably with even reflection at the walls.
struct MollifierSpec {
    double epsilon = 0.0;
};

/// Normalised one-dimensional weights w_{-r..r} for the given spacing.
std::vector<double> mollifier_weights(const MollifierSpec& spec, double h);

/// Smoothed scalar; mean preserved, maximum not increased. Identity (with a
/// warning on std::clog) when epsilon < h.
ScalarField mollify(const ScalarField& f, const MollifierSpec& spec);

/// Smoothed velocity: components mollified, wall-normal faces zeroed, then
/// Leray-projected so that the result is discretely divergence-free.
VelocityField mollify(const VelocityField& u, const MollifierSpec& spec);

/// Time levels t_n = n dt, n = 0..steps, shared by all trajectories below.
struct Trajectory {
    double dt = 0.0;
    std::vector<VelocityField> u;
    std::vector<ScalarField> w;

    [[nodiscard]] std::size_t levels() const { return u.size(); }
};

/// w_t + v.grad w + 4 kappa w = 2 kappa perp_div v with v frozen over each
/// step (v[n] on [t_n, t_{n+1}]); same update as advect_w. Returns
/// v.size() + 1 levels.
std::vector<ScalarField> solve_transport_linearized(const ScalarField& w0, const std::vector<VelocityField>& v,
                                                    const FluidParams& params, double dt, double cfl_max = 0.9);

/// u_t + v.grad u - (nu + kappa) Lap u + grad pi = -2 kappa perp_grad w with
/// v[n] and w[n] explicit and viscosity implicit. Returns v.size() + 1 levels.
std::vector<VelocityField> solve_ns_linearized(const VelocityField& u0, const std::vector<VelocityField>& v,
                                               const std::vector<ScalarField>& w, const FluidParams& params,
                                               double dt, double tol = 1e-10);

enum class InitialGuess { FrozenInitial, Zero };

struct SmallnessCheck {
    double r0 = 0.0;     ///< 10 (|u0|^2 + |w0|^2)
    double c_fit = 0.0;  ///< least C with |u(t)|^2 <= |u0|^2 + C t (|w0|^2 + R0) along the result
    double lhs = 0.0;    ///< |u0|^2 + C T (|w0|^2 + R0)
    bool satisfied = false;
};

struct FixedPointReport {
    int iterations = 0;
    std::vector<double> distances;  ///< sup over levels of the L2 distance of successive iterates
    bool converged = false;
    SmallnessCheck r0_check;
};

struct FixedPointOptions {
    double epsilon = 0.0;  ///< 0 selects h
    double dt = 0.0;       ///< 0 selects h / 4
    double tol = 1e-8;
    int max_iterations = 20;
    double solver_tol = 1e-11;
    InitialGuess guess = InitialGuess::FrozenInitial;
};

struct FixedPointResult {
    Trajectory trajectory;
    FixedPointReport report;
};

/// Picard iteration v -> F(v) on [0, T]. Non-convergence is reported, not thrown.
FixedPointResult fixed_point_solve(const VelocityField& u0, const ScalarField& w0, const FluidParams& params,
                                   double t_final, const FixedPointOptions& opts = {});

/// Direct solver on the same fixed time levels (micropolar::step with fixed dt).
Trajectory direct_trajectory(const VelocityField& u0, const ScalarField& w0, const FluidParams& params,
                             double t_final, double dt, double tol = 1e-11);

/// sup_n |a_n - b_n|_{L2} over matching levels.
double sup_l2_distance(const std::vector<VelocityField>& a, const std::vector<VelocityField>& b);

struct UniquenessReport {
    std::vector<double> t;
    std::vector<double> distance;  ///< D(t) = |U|^2 + |W|^2
    std::vector<double> exponent;  ///< int_0^t (1 + |grad u|^2 + |grad w|_4^2) of the base solution
    double c_fit = 0.0;
    int violations = 0;
    double growth = 0.0;           ///< D(T) / D(0)
};

/// Runs the base data and w0 + delta * phi, phi = sin(2 pi x/lx) sin(pi y/ly),
/// with fixed dt and compares them.
UniquenessReport uniqueness_probe(const VelocityField& u0, const ScalarField& w0, double delta,
                                  const FluidParams& params, double t_final, double dt, double tol = 1e-11);

}  // namespace micropol
