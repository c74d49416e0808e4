#pragma once

// Dirichlet and Neumann Poisson solvers on cell-centred scalars.
//
// Both solvers are preconditioned conjugate gradients. The default
// preconditioner is the exact fast sine/cosine-transform inverse of the
// five-point operator, so a solve normally finishes in one or two steps;
// the unpreconditioned path is kept for cross-checking.

#include <stdexcept>
#include <string>
#include <vector>

#include "micropol/grid.hpp"

namespace micropol {

/// Raised when an iterative solver hits its cap; carries the last residual.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
    [[nodiscard]] double residual() const { return residual_; }
    [[nodiscard]] int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

struct EllipticOptions {
    double tol = 1e-10;        ///< absolute, on the discrete L2 norm of the residual
    int max_iterations = 0;    ///< 0 selects 20 * nx
    bool preconditioned = true;
};

struct EllipticSolveResult {
    ScalarField solution;
    int iterations = 0;
    double residual_norm = 0.0;
    /// Neumann only: integral defect removed from the data before solving.
    double projection = 0.0;
};

/// Outward normal derivative prescribed at the wall faces.
struct NeumannData {
    std::vector<double> left, right;   ///< ny values each
    std::vector<double> bottom, top;   ///< nx values each

    static NeumannData zero(const GridSpec& g);
};

/// -Lap f = g, f = 0 on the walls.
EllipticSolveResult poisson_dirichlet(const ScalarField& g, const EllipticOptions& opts = {});

/// -Lap f = g, df/dn = flux on the walls; the returned f has zero mean.
/// Incompatible data are projected by removing the mean of the augmented
/// right-hand side; the integral defect (int g + oint flux) is reported.
EllipticSolveResult poisson_neumann(const ScalarField& g, const NeumannData& flux, const EllipticOptions& opts = {});

/// Discrete H2 norm (L2 + gradient + Hessian) used by the regularity audit.
double discrete_h2_norm(const ScalarField& f);

}  // namespace micropol
