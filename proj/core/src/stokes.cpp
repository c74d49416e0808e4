#include "micropol/stokes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fast_poisson.hpp"
#include "micropol/norms.hpp"

namespace micropol {

using detail::AxisKind;

namespace {

// Interior face unknowns: ux on i = 1..nx-1, uy on j = 1..ny-1.
struct FaceVectors {
    std::vector<double> x;  // (nx-1) * ny
    std::vector<double> y;  // nx * (ny-1)
};

FaceVectors pack(const VelocityField& u) {
    const GridSpec& g = u.grid();
    FaceVectors v;
    v.x.resize(static_cast<std::size_t>(g.nx - 1) * g.ny);
    v.y.resize(static_cast<std::size_t>(g.nx) * (g.ny - 1));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) v.x[static_cast<std::size_t>(j) * (g.nx - 1) + (i - 1)] = u.ux(i, j);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v.y[static_cast<std::size_t>(j - 1) * g.nx + i] = u.uy(i, j);
    return v;
}

VelocityField unpack(const GridSpec& g, const FaceVectors& v) {
    VelocityField u(g, true);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) u.ux(i, j) = v.x[static_cast<std::size_t>(j) * (g.nx - 1) + (i - 1)];
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.uy(i, j) = v.y[static_cast<std::size_t>(j - 1) * g.nx + i];
    return u;
}

// u = H^{-1} f on interior faces.
VelocityField helmholtz_inverse(const VelocityField& f, double alpha, double visc) {
    const GridSpec& g = f.grid();
    FaceVectors v = pack(f);
    detail::solve_helmholtz(v.x, g.nx, g.ny, AxisKind::NodeDirichlet, AxisKind::CellDirichlet, g.h, alpha, visc);
    detail::solve_helmholtz(v.y, g.nx, g.ny, AxisKind::CellDirichlet, AxisKind::NodeDirichlet, g.h, alpha, visc);
    return unpack(g, v);
}

double l2_cells(const ScalarField& s) {
    double acc = 0.0;
    for (double v : s.data()) acc += v * v;
    return std::sqrt(acc * s.grid().cell_area());
}

double l2_interior_faces(const VelocityField& u) {
    const GridSpec& g = u.grid();
    double acc = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) acc += u.ux(i, j) * u.ux(i, j);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) acc += u.uy(i, j) * u.uy(i, j);
    return std::sqrt(acc * g.cell_area());
}

void remove_mean(ScalarField& s) {
    const double m = s.mean();
    for (double& v : s.data()) v -= m;
}

ScalarField neumann_inverse(const ScalarField& r) {
    ScalarField z = r;
    const GridSpec& g = r.grid();
    detail::solve_helmholtz(z.data(), g.nx, g.ny, AxisKind::CellNeumann, AxisKind::CellNeumann, g.h, 0.0, 1.0);
    remove_mean(z);
    return z;
}

double momentum_residual(const VelocityField& u, const ScalarField& p, const VelocityField& f, double alpha,
                         double visc) {
    VelocityField r = alpha * u;
    r -= visc * laplacian_vec(u);
    r += gradient(p);
    r -= f;
    return l2_interior_faces(r);
}

}  // namespace

StokesSolveResult solve_stokes(const VelocityField& f, double alpha, double visc, const StokesOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_stokes: tol must be positive");
    if (!(visc > 0.0) || alpha < 0.0) throw std::invalid_argument("solve_stokes: need visc > 0, alpha >= 0");
    const GridSpec& g = f.grid();
    const int cap = opts.max_iterations > 0 ? opts.max_iterations : 20 * g.nx;

    auto precondition = [&](const ScalarField& r) {
        ScalarField z = visc * r;
        if (alpha > 0.0) z += alpha * neumann_inverse(r);
        remove_mean(z);
        return z;
    };

    StokesSolveResult res;
    res.pressure = ScalarField(g);
    ScalarField& p = res.pressure;

    VelocityField hf = helmholtz_inverse(f, alpha, visc);
    ScalarField r = -1.0 * divergence(hf);  // r = b - S p with p = 0; equals -D u
    remove_mean(r);
    double rnorm = l2_cells(r);
    int it = 0;
    if (rnorm > opts.tol) {
        ScalarField z = precondition(r);
        ScalarField dir = z;
        double rz = inner(r, z);
        while (it < cap) {
            ++it;
            ScalarField sd = -1.0 * divergence(helmholtz_inverse(gradient(dir), alpha, visc));
            remove_mean(sd);
            const double dsd = inner(dir, sd);
            if (!(dsd > 0.0)) break;
            const double a = rz / dsd;
            for (std::size_t k = 0; k < p.data().size(); ++k) {
                p.data()[k] += a * dir.data()[k];
                r.data()[k] -= a * sd.data()[k];
            }
            rnorm = l2_cells(r);
            if (rnorm <= opts.tol) break;
            z = precondition(r);
            const double rz_new = inner(r, z);
            const double b = rz_new / rz;
            rz = rz_new;
            for (std::size_t k = 0; k < dir.data().size(); ++k) dir.data()[k] = z.data()[k] + b * dir.data()[k];
        }
    }
    remove_mean(p);
    res.velocity = helmholtz_inverse(f - gradient(p), alpha, visc);
    res.iterations = it;
    res.div_residual = l2_cells(divergence(res.velocity));
    res.mom_residual = momentum_residual(res.velocity, p, f, alpha, visc);
    if (!(res.div_residual <= opts.tol) || !(res.mom_residual <= opts.tol)) {
        std::ostringstream os;
        os << "stokes: no convergence after " << it << " iterations (div " << res.div_residual << ", mom "
           << res.mom_residual << ")";
        throw NonConvergenceError(os.str(), std::max(res.div_residual, res.mom_residual), it);
    }
    return res;
}

StokesSolveResult stokes_stationary(const VelocityField& f, double tol) {
    return solve_stokes(f, 0.0, 1.0, StokesOptions{tol, 0});
}

StokesSolveResult apply_A_inv_perp(const ScalarField& w, double scale, double tol) {
    const GridSpec& g = w.grid();
    if (scale == 0.0) {
        StokesSolveResult zero;
        zero.velocity = VelocityField(g, true);
        zero.pressure = ScalarField(g);
        return zero;
    }
    VelocityField f = perp_gradient(w);
    f *= scale;
    return stokes_stationary(f, tol);
}

StokesSolveResult stokes_unsteady_step(const VelocityField& u, const VelocityField& f, double dt, double visc,
                                       double tol) {
    if (!(dt > 0.0)) throw std::invalid_argument("stokes_unsteady_step: dt must be positive");
    VelocityField rhs = (1.0 / dt) * u;
    rhs += f;
    return solve_stokes(rhs, 1.0 / dt, visc, StokesOptions{tol, 0});
}

VelocityField leray_project(const VelocityField& u) {
    VelocityField w = u;
    w.enforce_no_slip();
    // D G phi = D w  <=>  (-Lap_N) phi = -D w
    ScalarField rhs = -1.0 * divergence(w);
    remove_mean(rhs);
    const ScalarField phi = neumann_inverse(rhs);
    w -= gradient(phi);
    w.set_no_slip(u.no_slip());
    return w;
}

LogGradientAudit log_gradient_audit(const ScalarField& w, double q, double tol) {
    if (!(q > 2.0)) throw std::invalid_argument("log_gradient_audit: q must exceed 2");
    LogGradientAudit a;
    const StokesSolveResult s = apply_A_inv_perp(w, -1.0, tol);
    a.grad_u_inf = sobolev_seminorm(s.velocity, 1, INFINITY);
    a.f_inf = lp_norm(w, INFINITY);
    a.grad_f_q = std::sqrt(2.0) * sobolev_seminorm(w, 1, q);
    a.bound = (1.0 + a.f_inf) * std::log(std::numbers::e + a.grad_f_q);
    a.ratio = a.bound > 0.0 ? a.grad_u_inf / a.bound : 0.0;
    return a;
}

}  // namespace micropol
