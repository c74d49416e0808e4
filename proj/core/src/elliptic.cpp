#include "micropol/elliptic.hpp"

#include <cmath>
#include <sstream>
#include <span>

#include "fast_poisson.hpp"
#include "micropol/norms.hpp"

namespace micropol {

using detail::AxisKind;

NeumannData NeumannData::zero(const GridSpec& g) {
    NeumannData d;
    d.left.assign(g.ny, 0.0);
    d.right.assign(g.ny, 0.0);
    d.bottom.assign(g.nx, 0.0);
    d.top.assign(g.nx, 0.0);
    return d;
}

namespace {

double l2(const std::vector<double>& v, double area) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * area);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

void remove_mean(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

// PCG for the symmetric positive (semi)definite five-point operator.
EllipticSolveResult pcg(const GridSpec& g, std::vector<double> rhs, AxisKind kind, const EllipticOptions& opts,
                        const char* name) {
    const bool neumann = kind == AxisKind::CellNeumann;
    const int cap = opts.max_iterations > 0 ? opts.max_iterations : 20 * g.nx;
    const double area = g.cell_area();
    const std::size_t n = rhs.size();

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        detail::apply_helmholtz(x, y, g.nx, g.ny, kind, kind, g.h, 0.0, 1.0);
    };
    auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
        z = r;
        if (opts.preconditioned) detail::solve_helmholtz(z, g.nx, g.ny, kind, kind, g.h, 0.0, 1.0);
        if (neumann) remove_mean(z);
    };

    EllipticSolveResult res;
    res.solution = ScalarField(g);
    std::vector<double>& x = res.solution.data();
    std::vector<double> r = rhs;
    std::vector<double> z(n), p(n), ap(n);

    double rnorm = l2(r, area);
    int it = 0;
    if (rnorm > opts.tol) {
        precondition(r, z);
        p = z;
        double rz = dot(r, z);
        while (it < cap) {
            ++it;
            apply(p, ap);
            const double pap = dot(p, ap);
            if (pap <= 0.0) break;
            const double a = rz / pap;
            for (std::size_t k = 0; k < n; ++k) {
                x[k] += a * p[k];
                r[k] -= a * ap[k];
            }
            if (neumann) remove_mean(r);
            rnorm = l2(r, area);
            if (rnorm <= opts.tol) break;
            precondition(r, z);
            const double rz_new = dot(r, z);
            const double b = rz_new / rz;
            rz = rz_new;
            for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + b * p[k];
        }
        // Recompute the true residual to report it honestly.
        apply(x, ap);
        for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - ap[k];
        rnorm = l2(r, area);
    }
    if (neumann) remove_mean(x);
    res.iterations = it;
    res.residual_norm = rnorm;
    if (!(rnorm <= opts.tol)) {
        std::ostringstream os;
        os << name << ": no convergence after " << it << " iterations, residual " << rnorm;
        throw NonConvergenceError(os.str(), rnorm, it);
    }
    return res;
}

}  // namespace

EllipticSolveResult poisson_dirichlet(const ScalarField& g, const EllipticOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("poisson_dirichlet: tol must be positive");
    return pcg(g.grid(), g.data(), AxisKind::CellDirichlet, opts, "poisson_dirichlet");
}

EllipticSolveResult poisson_neumann(const ScalarField& g, const NeumannData& flux, const EllipticOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("poisson_neumann: tol must be positive");
    const GridSpec& gr = g.grid();
    std::vector<double> rhs = g.data();
    const double inv_h = 1.0 / gr.h;
    // Ghost f = f0 + h * flux turns the wall flux into a source of flux / h.
    for (int j = 0; j < gr.ny; ++j) {
        rhs[static_cast<std::size_t>(j) * gr.nx] += flux.left[j] * inv_h;
        rhs[static_cast<std::size_t>(j) * gr.nx + gr.nx - 1] += flux.right[j] * inv_h;
    }
    for (int i = 0; i < gr.nx; ++i) {
        rhs[i] += flux.bottom[i] * inv_h;
        rhs[static_cast<std::size_t>(gr.ny - 1) * gr.nx + i] += flux.top[i] * inv_h;
    }
    double total = 0.0;
    for (double v : rhs) total += v;
    const double defect = total * gr.cell_area();
    const double shift = total / static_cast<double>(rhs.size());
    for (double& v : rhs) v -= shift;

    EllipticSolveResult res = pcg(gr, std::move(rhs), AxisKind::CellNeumann, opts, "poisson_neumann");
    res.projection = defect;
    return res;
}

double discrete_h2_norm(const ScalarField& f) {
    const double l2f = lp_norm(f, 2.0);
    const double g1 = sobolev_seminorm(f, 1, 2.0);
    const double g2 = sobolev_seminorm(f, 2, 2.0);
    return std::sqrt(l2f * l2f + g1 * g1 + g2 * g2);
}

}  // namespace micropol
