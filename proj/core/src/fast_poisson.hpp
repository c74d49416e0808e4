#pragma once

// Exact solver for (alpha - beta * Laplacian_h) f = r on tensor-product
// index sets of the MAC grid, diagonalised by FFTW real-to-real transforms.

#include <span>

namespace micropol::detail {

enum class AxisKind {
    CellDirichlet,  // n cell unknowns, wall halfway to the ghost, ghost = -f
    CellNeumann,    // n cell unknowns, ghost = f
    NodeDirichlet,  // n-1 interior node unknowns, zero at both end nodes
};

/// Number of unknowns along an axis with `cells` cells.
int axis_unknowns(AxisKind kind, int cells);

/// Solves in place. `data` holds (unknowns_x * unknowns_y) values, x fastest.
/// For a pure Neumann problem with alpha == 0 the constant mode is set to zero.
void solve_helmholtz(std::span<double> data, int cells_x, int cells_y, AxisKind kx, AxisKind ky, double h,
                     double alpha, double beta);

/// Applies (alpha - beta * Laplacian_h) with the same boundary treatment.
void apply_helmholtz(std::span<const double> in, std::span<double> out, int cells_x, int cells_y, AxisKind kx,
                     AxisKind ky, double h, double alpha, double beta);

}  // namespace micropol::detail
