#pragma once

// Discrete Lebesgue and Sobolev norms on the MAC grid.
//
// Scalars use midpoint quadrature over cells. Velocities are measured
// component-wise on their own faces, with half weight on wall-normal
// faces; for p = 2 this is the Euclidean L2 norm of the vector field.

#include "micropol/grid.hpp"

namespace micropol {

/// ||f||_{L^p}; p = INFINITY gives the grid maximum. Throws std::domain_error for p < 1.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VelocityField& u, double p);

/// ||D^k f||_{L^p} for k in {1, 2}.
///
/// Scalars: cell-centred derivatives (one-sided second order on the edge
/// cells), pointwise Frobenius magnitude of the derivative tensor.
/// Velocities, k = 1: every first difference of every component at its
/// natural staggered location; across a no-slip wall the half-cell
/// difference to the zero wall value is used, so that for p = 2 the square
/// equals <-laplacian_vec(u), u>. Velocities, k = 2: components averaged to
/// cell centres first.
/// Throws std::invalid_argument for other orders.
double sobolev_seminorm(const ScalarField& f, int order, double p);
double sobolev_seminorm(const VelocityField& u, int order, double p);

/// ||D^k f||_{L^p} for any k >= 1 (nested cell-centred differences).
double derivative_norm(const ScalarField& f, int order, double p);

/// sqrt(||u||^2 + ||grad u||^2)
double h1_norm(const ScalarField& f);
double h1_norm(const VelocityField& u);

}  // namespace micropol
