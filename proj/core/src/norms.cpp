#include "micropol/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace micropol {

namespace {

void check_p(double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
}

// Accumulates sum w |v|^p (or max |v|) over weighted samples.
class Accumulator {
public:
    explicit Accumulator(double p) : p_(p), inf_(std::isinf(p)) {}
    void add(double v, double weight) {
        const double a = std::abs(v);
        if (inf_) {
            if (weight > 0.0) acc_ = std::max(acc_, a);
        } else if (p_ == 2.0) {
            acc_ += weight * a * a;
        } else {
            acc_ += weight * std::pow(a, p_);
        }
    }
    [[nodiscard]] double result() const {
        if (inf_) return acc_;
        if (p_ == 2.0) return std::sqrt(acc_);
        return std::pow(acc_, 1.0 / p_);
    }

private:
    double p_;
    bool inf_;
    double acc_ = 0.0;
};

// Derivative tensor components of order k at cell centres.
std::vector<ScalarField> derivative_components(const ScalarField& f, int order) {
    std::vector<ScalarField> comps{f};
    for (int k = 0; k < order; ++k) {
        std::vector<ScalarField> next;
        next.reserve(comps.size() * 2);
        for (const auto& c : comps) {
            next.push_back(ddx(c));
            next.push_back(ddy(c));
        }
        comps = std::move(next);
    }
    return comps;
}

double pointwise_frobenius_norm(const std::vector<ScalarField>& comps, double p) {
    const GridSpec& g = comps.front().grid();
    Accumulator acc(p);
    const double area = g.cell_area();
    const std::size_t n = g.cells();
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (const auto& c : comps) s += c.data()[k] * c.data()[k];
        acc.add(std::sqrt(s), area);
    }
    return acc.result();
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
    check_p(p);
    Accumulator acc(p);
    const double area = f.grid().cell_area();
    for (double v : f.data()) acc.add(v, area);
    return acc.result();
}

double lp_norm(const VelocityField& u, double p) {
    check_p(p);
    const GridSpec& g = u.grid();
    const double area = g.cell_area();
    Accumulator acc(p);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) acc.add(u.ux(i, j), (i == 0 || i == g.nx) ? 0.5 * area : area);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) acc.add(u.uy(i, j), (j == 0 || j == g.ny) ? 0.5 * area : area);
    return acc.result();
}

double derivative_norm(const ScalarField& f, int order, double p) {
    check_p(p);
    if (order < 1) throw std::invalid_argument("derivative_norm: order must be >= 1");
    return pointwise_frobenius_norm(derivative_components(f, order), p);
}

double sobolev_seminorm(const ScalarField& f, int order, double p) {
    if (order != 1 && order != 2) throw std::invalid_argument("sobolev_seminorm: order must be 1 or 2");
    return derivative_norm(f, order, p);
}

double sobolev_seminorm(const VelocityField& u, int order, double p) {
    check_p(p);
    if (order == 2) {
        std::vector<ScalarField> comps = derivative_components(ux_at_cells(u), 2);
        for (auto& c : derivative_components(uy_at_cells(u), 2)) comps.push_back(std::move(c));
        return pointwise_frobenius_norm(comps, p);
    }
    if (order != 1) throw std::invalid_argument("sobolev_seminorm: order must be 1 or 2");

    const GridSpec& g = u.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    const double h = g.h;
    const double area = g.cell_area();
    const bool ns = u.no_slip();
    Accumulator acc(p);

    // ux: along x between neighbouring faces (cell centres).
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) acc.add((u.ux(i + 1, j) - u.ux(i, j)) / h, area);
    // ux: along y at nodes, plus the half cells next to the walls.
    for (int i = 0; i <= nx; ++i) {
        const double colw = (i == 0 || i == nx) ? 0.5 : 1.0;
        for (int j = 0; j + 1 < ny; ++j) acc.add((u.ux(i, j + 1) - u.ux(i, j)) / h, colw * area);
        const double db = ns ? u.ux(i, 0) / (0.5 * h) : (u.ux(i, 1) - u.ux(i, 0)) / h;
        const double dt = ns ? -u.ux(i, ny - 1) / (0.5 * h) : (u.ux(i, ny - 1) - u.ux(i, ny - 2)) / h;
        acc.add(db, 0.5 * colw * area);
        acc.add(dt, 0.5 * colw * area);
    }
    // uy: along y between neighbouring faces (cell centres).
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) acc.add((u.uy(i, j + 1) - u.uy(i, j)) / h, area);
    // uy: along x at nodes, plus half cells next to the walls.
    for (int j = 0; j <= ny; ++j) {
        const double roww = (j == 0 || j == ny) ? 0.5 : 1.0;
        for (int i = 0; i + 1 < nx; ++i) acc.add((u.uy(i + 1, j) - u.uy(i, j)) / h, roww * area);
        const double dl = ns ? u.uy(0, j) / (0.5 * h) : (u.uy(1, j) - u.uy(0, j)) / h;
        const double dr = ns ? -u.uy(nx - 1, j) / (0.5 * h) : (u.uy(nx - 1, j) - u.uy(nx - 2, j)) / h;
        acc.add(dl, 0.5 * roww * area);
        acc.add(dr, 0.5 * roww * area);
    }
    return acc.result();
}

double h1_norm(const ScalarField& f) {
    const double a = lp_norm(f, 2.0);
    const double b = sobolev_seminorm(f, 1, 2.0);
    return std::sqrt(a * a + b * b);
}

double h1_norm(const VelocityField& u) {
    const double a = lp_norm(u, 2.0);
    const double b = sobolev_seminorm(u, 1, 2.0);
    return std::sqrt(a * a + b * b);
}

}  // namespace micropol
