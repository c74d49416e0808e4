#pragma once

// MAC-staggered grid on a rectangle and its discrete differential operators.
//
// Layout (h = lx/nx = ly/ny):
//   - scalars live at cell centres ((i+1/2)h, (j+1/2)h), i < nx, j < ny
//   - ux lives on vertical faces (i h, (j+1/2)h), i <= nx, j < ny
//   - uy lives on horizontal faces ((i+1/2)h, j h), i < nx, j <= ny
// All arrays are row-major with x running fastest.
//
// A velocity field flagged no-slip has zero normal components on the wall
// faces; its tangential components see the ghost value -u (linear
// extrapolation through a zero wall value).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace micropol {

/// Raised for invalid grid or run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;
    double h = 0.0;

    [[nodiscard]] std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    [[nodiscard]] double cell_area() const { return h * h; }
    [[nodiscard]] double xc(int i) const { return (i + 0.5) * h; }
    [[nodiscard]] double yc(int j) const { return (j + 0.5) * h; }
    [[nodiscard]] double xf(int i) const { return i * h; }
    [[nodiscard]] double yf(int j) const { return j * h; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Validates and builds a grid. Throws ConfigError for nx, ny < 8,
/// non-positive lengths, or non-square cells (1e-12 relative).
GridSpec make_grid(int nx, int ny, double lx, double ly);

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid, double value = 0.0)
        : grid_(grid), data_(grid.cells(), value) {}

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] double& operator()(int i, int j) { return data_[index(i, j)]; }
    [[nodiscard]] double operator()(int i, int j) const { return data_[index(i, j)]; }
    [[nodiscard]] std::vector<double>& data() { return data_; }
    [[nodiscard]] const std::vector<double>& data() const { return data_; }

    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * grid_.nx + i;
    }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double a);

    /// Fills with f(x, y) evaluated at the cell centres.
    template <class F>
    static ScalarField sample(const GridSpec& g, F&& f) {
        ScalarField out(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) out(i, j) = f(g.xc(i), g.yc(j));
        return out;
    }

    [[nodiscard]] bool all_finite() const;
    [[nodiscard]] double mean() const;

private:
    GridSpec grid_{};
    std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

class VelocityField {
public:
    VelocityField() = default;
    explicit VelocityField(const GridSpec& grid, bool no_slip = true)
        : grid_(grid),
          ux_(static_cast<std::size_t>(grid.nx + 1) * grid.ny, 0.0),
          uy_(static_cast<std::size_t>(grid.nx) * (grid.ny + 1), 0.0),
          no_slip_(no_slip) {}

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] bool no_slip() const { return no_slip_; }
    void set_no_slip(bool flag) { no_slip_ = flag; }

    [[nodiscard]] double& ux(int i, int j) { return ux_[static_cast<std::size_t>(j) * (grid_.nx + 1) + i]; }
    [[nodiscard]] double ux(int i, int j) const { return ux_[static_cast<std::size_t>(j) * (grid_.nx + 1) + i]; }
    [[nodiscard]] double& uy(int i, int j) { return uy_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    [[nodiscard]] double uy(int i, int j) const { return uy_[static_cast<std::size_t>(j) * grid_.nx + i]; }

    [[nodiscard]] std::vector<double>& ux_data() { return ux_; }
    [[nodiscard]] const std::vector<double>& ux_data() const { return ux_; }
    [[nodiscard]] std::vector<double>& uy_data() { return uy_; }
    [[nodiscard]] const std::vector<double>& uy_data() const { return uy_; }

    /// Tangential ghost values across the walls (see file comment).
    [[nodiscard]] double ux_ghost_below(int i) const;
    [[nodiscard]] double ux_ghost_above(int i) const;
    [[nodiscard]] double uy_ghost_left(int j) const;
    [[nodiscard]] double uy_ghost_right(int j) const;

    /// Zeroes the wall-normal faces and sets the no-slip flag.
    void enforce_no_slip();

    VelocityField& operator+=(const VelocityField& o);
    VelocityField& operator-=(const VelocityField& o);
    VelocityField& operator*=(double a);

    /// Samples (fx(x,y), fy(x,y)) on the faces. The no-slip flag is applied
    /// afterwards if requested (wall-normal faces zeroed).
    template <class FX, class FY>
    static VelocityField sample(const GridSpec& g, FX&& fx, FY&& fy, bool no_slip) {
        VelocityField out(g, no_slip);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) out.ux(i, j) = fx(g.xf(i), g.yc(j));
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) out.uy(i, j) = fy(g.xc(i), g.yf(j));
        if (no_slip) out.enforce_no_slip();
        return out;
    }

    [[nodiscard]] bool all_finite() const;
    [[nodiscard]] double max_abs() const;

private:
    GridSpec grid_{};
    std::vector<double> ux_;
    std::vector<double> uy_;
    bool no_slip_ = true;
};

VelocityField operator+(VelocityField a, const VelocityField& b);
VelocityField operator-(VelocityField a, const VelocityField& b);
VelocityField operator*(double s, VelocityField a);

/// Nodal field ((nx+1) x (ny+1)) used as a discrete streamfunction.
struct NodeField {
    GridSpec grid{};
    std::vector<double> data;

    explicit NodeField(const GridSpec& g)
        : grid(g), data(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0) {}
    [[nodiscard]] double& operator()(int i, int j) { return data[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
    [[nodiscard]] double operator()(int i, int j) const { return data[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
};

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// Cell-centred divergence (ux(i+1)-ux(i) + uy(j+1)-uy(j))/h.
ScalarField divergence(const VelocityField& u);

/// Face gradient of a cell scalar on interior faces; wall faces are zero.
VelocityField gradient(const ScalarField& p);

/// Average of the four surrounding cells at every node, using quadratic
/// extrapolation for ghost cells outside the domain.
NodeField cell_to_node(const ScalarField& w);

/// Discrete curl of a nodal streamfunction: ux = -dpsi/dy, uy = dpsi/dx.
/// The result is exactly divergence-free.
VelocityField curl(const NodeField& psi, bool no_slip = false);

/// (-dw/dy, dw/dx) on every face, computed as the curl of the node-averaged
/// field. divergence(perp_gradient(w)) vanishes identically.
VelocityField perp_gradient(const ScalarField& w);

/// Nodal vorticity duy/dx - dux/dy (tangential ghosts per the no-slip flag).
NodeField nodal_vorticity(const VelocityField& u);

/// Cell-centred vorticity: average of the four nodal vorticities.
ScalarField perp_divergence(const VelocityField& u);

enum class ScalarGhost { Extrapolate, Dirichlet, Neumann };

/// Five-point Laplacian; wall ghosts chosen by `ghost`.
ScalarField laplacian(const ScalarField& w, ScalarGhost ghost = ScalarGhost::Extrapolate);

/// Component-wise five-point Laplacian. Interior faces use the tangential
/// ghosts; wall-normal faces use a one-sided second-order stencil across the
/// wall and the ordinary stencil along it.
VelocityField laplacian_vec(const VelocityField& u);

/// Conservative MAC advection div(a (x) u) with advecting field `a`
/// (energy-neutral for divergence-free, no-slip `a`). Wall faces are zero.
VelocityField advection(const VelocityField& a, const VelocityField& u);

/// Cell-centred first derivatives, centred inside, one-sided second order
/// on the first and last cells.
ScalarField ddx(const ScalarField& f);
ScalarField ddy(const ScalarField& f);

/// Face values averaged to cell centres, one scalar per component.
ScalarField ux_at_cells(const VelocityField& u);
ScalarField uy_at_cells(const VelocityField& u);

/// Flux-form divergence of (u w) with w averaged to faces.
ScalarField flux_divergence(const VelocityField& u, const ScalarField& w);

/// Discrete inner products (face weights h^2 inside, h^2/2 on wall faces).
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VelocityField& a, const VelocityField& b);

/// Bilinear velocity at an arbitrary point inside the closed domain.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};
Vec2 sample_velocity(const VelocityField& u, double x, double y);

/// Catmull-Rom bicubic sample at (x, y), clamped to the range of the four
/// nearest cell values (monotone). Indices outside the grid are clamped.
double sample_scalar(const ScalarField& w, double x, double y);

}  // namespace micropol
