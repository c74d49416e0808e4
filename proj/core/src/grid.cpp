#include "micropol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace micropol {

GridSpec make_grid(int nx, int ny, double lx, double ly) {
    if (nx < 8 || ny < 8) {
        std::ostringstream os;
        os << "grid too coarse: nx=" << nx << ", ny=" << ny << " (need >= 8)";
        throw ConfigError(os.str());
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw ConfigError("domain lengths must be positive and finite");
    const double hx = lx / nx;
    const double hy = ly / ny;
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
        std::ostringstream os;
        os << "non-square cells: lx/nx=" << hx << " but ly/ny=" << hy;
        throw ConfigError(os.str());
    }
    return GridSpec{nx, ny, lx, ly, hx};
}

// ---------------------------------------------------------------------------
// ScalarField
// ---------------------------------------------------------------------------

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}
ScalarField& ScalarField::operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
}
bool ScalarField::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}
double ScalarField::mean() const {
    if (data_.empty()) return 0.0;
    return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------------------
// VelocityField
// ---------------------------------------------------------------------------

double VelocityField::ux_ghost_below(int i) const {
    return no_slip_ ? -ux(i, 0) : 2.0 * ux(i, 0) - ux(i, 1);
}
double VelocityField::ux_ghost_above(int i) const {
    const int t = grid_.ny - 1;
    return no_slip_ ? -ux(i, t) : 2.0 * ux(i, t) - ux(i, t - 1);
}
double VelocityField::uy_ghost_left(int j) const {
    return no_slip_ ? -uy(0, j) : 2.0 * uy(0, j) - uy(1, j);
}
double VelocityField::uy_ghost_right(int j) const {
    const int r = grid_.nx - 1;
    return no_slip_ ? -uy(r, j) : 2.0 * uy(r, j) - uy(r - 1, j);
}

void VelocityField::enforce_no_slip() {
    for (int j = 0; j < grid_.ny; ++j) {
        ux(0, j) = 0.0;
        ux(grid_.nx, j) = 0.0;
    }
    for (int i = 0; i < grid_.nx; ++i) {
        uy(i, 0) = 0.0;
        uy(i, grid_.ny) = 0.0;
    }
    no_slip_ = true;
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
    for (std::size_t k = 0; k < ux_.size(); ++k) ux_[k] += o.ux_[k];
    for (std::size_t k = 0; k < uy_.size(); ++k) uy_[k] += o.uy_[k];
    return *this;
}
VelocityField& VelocityField::operator-=(const VelocityField& o) {
    for (std::size_t k = 0; k < ux_.size(); ++k) ux_[k] -= o.ux_[k];
    for (std::size_t k = 0; k < uy_.size(); ++k) uy_[k] -= o.uy_[k];
    return *this;
}
VelocityField& VelocityField::operator*=(double a) {
    for (double& v : ux_) v *= a;
    for (double& v : uy_) v *= a;
    return *this;
}
bool VelocityField::all_finite() const {
    auto fin = [](double v) { return std::isfinite(v); };
    return std::all_of(ux_.begin(), ux_.end(), fin) && std::all_of(uy_.begin(), uy_.end(), fin);
}
double VelocityField::max_abs() const {
    double m = 0.0;
    for (double v : ux_) m = std::max(m, std::abs(v));
    for (double v : uy_) m = std::max(m, std::abs(v));
    return m;
}

VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
VelocityField operator*(double s, VelocityField a) { return a *= s; }

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

ScalarField divergence(const VelocityField& u) {
    const GridSpec& g = u.grid();
    ScalarField d(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            d(i, j) = ((u.ux(i + 1, j) - u.ux(i, j)) + (u.uy(i, j + 1) - u.uy(i, j))) * inv_h;
    return d;
}

VelocityField gradient(const ScalarField& p) {
    const GridSpec& g = p.grid();
    VelocityField out(g, true);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) out.ux(i, j) = (p(i, j) - p(i - 1, j)) * inv_h;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.uy(i, j) = (p(i, j) - p(i, j - 1)) * inv_h;
    return out;
}

namespace {

// Cell values padded by one ghost layer filled by quadratic extrapolation.
class PaddedCells {
public:
    explicit PaddedCells(const ScalarField& w)
        : nx_(w.grid().nx), ny_(w.grid().ny), v_(static_cast<std::size_t>(nx_ + 2) * (ny_ + 2)) {
        for (int j = 0; j < ny_; ++j)
            for (int i = 0; i < nx_; ++i) at(i, j) = w(i, j);
        for (int i = 0; i < nx_; ++i) {
            at(i, -1) = 3.0 * at(i, 0) - 3.0 * at(i, 1) + at(i, 2);
            at(i, ny_) = 3.0 * at(i, ny_ - 1) - 3.0 * at(i, ny_ - 2) + at(i, ny_ - 3);
        }
        for (int j = -1; j <= ny_; ++j) {
            at(-1, j) = 3.0 * at(0, j) - 3.0 * at(1, j) + at(2, j);
            at(nx_, j) = 3.0 * at(nx_ - 1, j) - 3.0 * at(nx_ - 2, j) + at(nx_ - 3, j);
        }
    }
    double& at(int i, int j) { return v_[static_cast<std::size_t>(j + 1) * (nx_ + 2) + (i + 1)]; }
    [[nodiscard]] double at(int i, int j) const {
        return v_[static_cast<std::size_t>(j + 1) * (nx_ + 2) + (i + 1)];
    }

private:
    int nx_, ny_;
    std::vector<double> v_;
};

}  // namespace

NodeField cell_to_node(const ScalarField& w) {
    const GridSpec& g = w.grid();
    const PaddedCells e(w);
    NodeField n(g);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            n(i, j) = 0.25 * (e.at(i - 1, j - 1) + e.at(i, j - 1) + e.at(i - 1, j) + e.at(i, j));
    return n;
}

VelocityField curl(const NodeField& psi, bool no_slip) {
    const GridSpec& g = psi.grid;
    VelocityField u(g, false);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) u.ux(i, j) = -(psi(i, j + 1) - psi(i, j)) * inv_h;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.uy(i, j) = (psi(i + 1, j) - psi(i, j)) * inv_h;
    if (no_slip) u.enforce_no_slip();
    return u;
}

VelocityField perp_gradient(const ScalarField& w) { return curl(cell_to_node(w), false); }

NodeField nodal_vorticity(const VelocityField& u) {
    const GridSpec& g = u.grid();
    NodeField z(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            const double uy_r = (i < g.nx) ? u.uy(i, j) : u.uy_ghost_right(j);
            const double uy_l = (i > 0) ? u.uy(i - 1, j) : u.uy_ghost_left(j);
            const double ux_t = (j < g.ny) ? u.ux(i, j) : u.ux_ghost_above(i);
            const double ux_b = (j > 0) ? u.ux(i, j - 1) : u.ux_ghost_below(i);
            z(i, j) = (uy_r - uy_l) * inv_h - (ux_t - ux_b) * inv_h;
        }
    }
    return z;
}

ScalarField perp_divergence(const VelocityField& u) {
    const GridSpec& g = u.grid();
    const NodeField z = nodal_vorticity(u);
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = 0.25 * (z(i, j) + z(i + 1, j) + z(i, j + 1) + z(i + 1, j + 1));
    return out;
}

ScalarField laplacian(const ScalarField& w, ScalarGhost ghost) {
    const GridSpec& g = w.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    auto ghost_value = [ghost](double f0, double f1, double f2) {
        switch (ghost) {
            case ScalarGhost::Dirichlet: return -f0;
            case ScalarGhost::Neumann: return f0;
            case ScalarGhost::Extrapolate: break;
        }
        return 3.0 * f0 - 3.0 * f1 + f2;
    };
    auto val = [&](int i, int j) -> double {
        if (i < 0) return ghost_value(w(0, j), w(1, j), w(2, j));
        if (i >= nx) return ghost_value(w(nx - 1, j), w(nx - 2, j), w(nx - 3, j));
        if (j < 0) return ghost_value(w(i, 0), w(i, 1), w(i, 2));
        if (j >= ny) return ghost_value(w(i, ny - 1), w(i, ny - 2), w(i, ny - 3));
        return w(i, j);
    };
    ScalarField out(g);
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out(i, j) = (val(i - 1, j) + val(i + 1, j) + val(i, j - 1) + val(i, j + 1) - 4.0 * w(i, j)) * inv_h2;
    return out;
}

VelocityField laplacian_vec(const VelocityField& u) {
    const GridSpec& g = u.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    const double inv_h2 = 1.0 / (g.h * g.h);
    VelocityField out(g, u.no_slip());

    auto uxv = [&](int i, int j) -> double {
        if (j < 0) return u.ux_ghost_below(i);
        if (j >= ny) return u.ux_ghost_above(i);
        return u.ux(i, j);
    };
    auto uyv = [&](int i, int j) -> double {
        if (i < 0) return u.uy_ghost_left(j);
        if (i >= nx) return u.uy_ghost_right(j);
        return u.uy(i, j);
    };

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            double dxx;
            if (i == 0)
                dxx = 2.0 * u.ux(0, j) - 5.0 * u.ux(1, j) + 4.0 * u.ux(2, j) - u.ux(3, j);
            else if (i == nx)
                dxx = 2.0 * u.ux(nx, j) - 5.0 * u.ux(nx - 1, j) + 4.0 * u.ux(nx - 2, j) - u.ux(nx - 3, j);
            else
                dxx = u.ux(i - 1, j) - 2.0 * u.ux(i, j) + u.ux(i + 1, j);
            const double dyy = uxv(i, j - 1) - 2.0 * u.ux(i, j) + uxv(i, j + 1);
            out.ux(i, j) = (dxx + dyy) * inv_h2;
        }
    }
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double dyy;
            if (j == 0)
                dyy = 2.0 * u.uy(i, 0) - 5.0 * u.uy(i, 1) + 4.0 * u.uy(i, 2) - u.uy(i, 3);
            else if (j == ny)
                dyy = 2.0 * u.uy(i, ny) - 5.0 * u.uy(i, ny - 1) + 4.0 * u.uy(i, ny - 2) - u.uy(i, ny - 3);
            else
                dyy = u.uy(i, j - 1) - 2.0 * u.uy(i, j) + u.uy(i, j + 1);
            const double dxx = uyv(i - 1, j) - 2.0 * u.uy(i, j) + uyv(i + 1, j);
            out.uy(i, j) = (dxx + dyy) * inv_h2;
        }
    }
    return out;
}

VelocityField advection(const VelocityField& a, const VelocityField& u) {
    const GridSpec& g = u.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    const double inv_h = 1.0 / g.h;
    VelocityField out(g, true);

    auto u_ux = [&](int i, int j) -> double {
        if (j < 0) return u.ux_ghost_below(i);
        if (j >= ny) return u.ux_ghost_above(i);
        return u.ux(i, j);
    };
    auto u_uy = [&](int i, int j) -> double {
        if (i < 0) return u.uy_ghost_left(j);
        if (i >= nx) return u.uy_ghost_right(j);
        return u.uy(i, j);
    };

    // x-momentum on interior vertical faces.
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            auto cell_flux = [&](int c) {
                const double ac = 0.5 * (a.ux(c, j) + a.ux(c + 1, j));
                const double uc = 0.5 * (u.ux(c, j) + u.ux(c + 1, j));
                return ac * uc;
            };
            auto node_flux = [&](int jn) {
                const double ay = 0.5 * (a.uy(i - 1, jn) + a.uy(i, jn));
                const double ux = 0.5 * (u_ux(i, jn - 1) + u_ux(i, jn));
                return ay * ux;
            };
            out.ux(i, j) = (cell_flux(i) - cell_flux(i - 1)) * inv_h + (node_flux(j + 1) - node_flux(j)) * inv_h;
        }
    }
    // y-momentum on interior horizontal faces.
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            auto cell_flux = [&](int c) {
                const double ac = 0.5 * (a.uy(i, c) + a.uy(i, c + 1));
                const double uc = 0.5 * (u.uy(i, c) + u.uy(i, c + 1));
                return ac * uc;
            };
            auto node_flux = [&](int in) {
                const double ax = 0.5 * (a.ux(in, j - 1) + a.ux(in, j));
                const double uy = 0.5 * (u_uy(in - 1, j) + u_uy(in, j));
                return ax * uy;
            };
            out.uy(i, j) = (node_flux(i + 1) - node_flux(i)) * inv_h + (cell_flux(j) - cell_flux(j - 1)) * inv_h;
        }
    }
    return out;
}

ScalarField ddx(const ScalarField& f) {
    const GridSpec& g = f.grid();
    const int n = g.nx;
    const double c = 1.0 / (2.0 * g.h);
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        out(0, j) = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * c;
        for (int i = 1; i < n - 1; ++i) out(i, j) = (f(i + 1, j) - f(i - 1, j)) * c;
        out(n - 1, j) = (3.0 * f(n - 1, j) - 4.0 * f(n - 2, j) + f(n - 3, j)) * c;
    }
    return out;
}

ScalarField ddy(const ScalarField& f) {
    const GridSpec& g = f.grid();
    const int n = g.ny;
    const double c = 1.0 / (2.0 * g.h);
    ScalarField out(g);
    for (int i = 0; i < g.nx; ++i) {
        out(i, 0) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * c;
        for (int j = 1; j < n - 1; ++j) out(i, j) = (f(i, j + 1) - f(i, j - 1)) * c;
        out(i, n - 1) = (3.0 * f(i, n - 1) - 4.0 * f(i, n - 2) + f(i, n - 3)) * c;
    }
    return out;
}

ScalarField ux_at_cells(const VelocityField& u) {
    const GridSpec& g = u.grid();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(i, j) = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
    return out;
}

ScalarField uy_at_cells(const VelocityField& u) {
    const GridSpec& g = u.grid();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(i, j) = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
    return out;
}

ScalarField flux_divergence(const VelocityField& u, const ScalarField& w) {
    const GridSpec& g = u.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    auto wx = [&](int i, int j) {  // w on vertical face i
        if (i == 0) return w(0, j);
        if (i == nx) return w(nx - 1, j);
        return 0.5 * (w(i - 1, j) + w(i, j));
    };
    auto wy = [&](int i, int j) {
        if (j == 0) return w(i, 0);
        if (j == ny) return w(i, ny - 1);
        return 0.5 * (w(i, j - 1) + w(i, j));
    };
    ScalarField out(g);
    const double inv_h = 1.0 / g.h;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out(i, j) = (u.ux(i + 1, j) * wx(i + 1, j) - u.ux(i, j) * wx(i, j) + u.uy(i, j + 1) * wy(i, j + 1) -
                         u.uy(i, j) * wy(i, j)) *
                        inv_h;
    return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    const auto& x = a.data();
    const auto& y = b.data();
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s * a.grid().cell_area();
}

double inner(const VelocityField& a, const VelocityField& b) {
    const GridSpec& g = a.grid();
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double wgt = (i == 0 || i == g.nx) ? 0.5 : 1.0;
            s += wgt * a.ux(i, j) * b.ux(i, j);
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double wgt = (j == 0 || j == g.ny) ? 0.5 : 1.0;
            s += wgt * a.uy(i, j) * b.uy(i, j);
        }
    return s * g.cell_area();
}

Vec2 sample_velocity(const VelocityField& u, double x, double y) {
    const GridSpec& g = u.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    x = std::clamp(x, 0.0, g.lx);
    y = std::clamp(y, 0.0, g.ly);

    auto ux_at = [&](int i, int j) -> double {
        if (j < 0) return u.ux_ghost_below(i);
        if (j >= ny) return u.ux_ghost_above(i);
        return u.ux(i, j);
    };
    auto uy_at = [&](int i, int j) -> double {
        if (i < 0) return u.uy_ghost_left(j);
        if (i >= nx) return u.uy_ghost_right(j);
        return u.uy(i, j);
    };

    Vec2 v;
    {
        const double s = x / g.h;
        const double t = y / g.h - 0.5;
        const int i0 = std::clamp(static_cast<int>(std::floor(s)), 0, nx - 1);
        const int j0 = std::clamp(static_cast<int>(std::floor(t)), -1, ny - 1);
        const double fx = s - i0;
        const double fy = t - j0;
        v.x = (1 - fx) * (1 - fy) * ux_at(i0, j0) + fx * (1 - fy) * ux_at(i0 + 1, j0) +
              (1 - fx) * fy * ux_at(i0, j0 + 1) + fx * fy * ux_at(i0 + 1, j0 + 1);
    }
    {
        const double s = x / g.h - 0.5;
        const double t = y / g.h;
        const int i0 = std::clamp(static_cast<int>(std::floor(s)), -1, nx - 1);
        const int j0 = std::clamp(static_cast<int>(std::floor(t)), 0, ny - 1);
        const double fx = s - i0;
        const double fy = t - j0;
        v.y = (1 - fx) * (1 - fy) * uy_at(i0, j0) + fx * (1 - fy) * uy_at(i0 + 1, j0) +
              (1 - fx) * fy * uy_at(i0, j0 + 1) + fx * fy * uy_at(i0 + 1, j0 + 1);
    }
    return v;
}

double sample_scalar(const ScalarField& w, double x, double y) {
    const GridSpec& g = w.grid();
    const double s = x / g.h - 0.5;
    const double t = y / g.h - 0.5;
    const int i0 = static_cast<int>(std::floor(s));
    const int j0 = static_cast<int>(std::floor(t));
    const double fx = std::clamp(s - i0, 0.0, 1.0);
    const double fy = std::clamp(t - j0, 0.0, 1.0);

    auto at = [&](int i, int j) { return w(std::clamp(i, 0, g.nx - 1), std::clamp(j, 0, g.ny - 1)); };
    auto weights = [](double f, double out[4]) {
        const double f2 = f * f;
        const double f3 = f2 * f;
        out[0] = 0.5 * (-f3 + 2.0 * f2 - f);
        out[1] = 0.5 * (3.0 * f3 - 5.0 * f2 + 2.0);
        out[2] = 0.5 * (-3.0 * f3 + 4.0 * f2 + f);
        out[3] = 0.5 * (f3 - f2);
    };
    double wx[4];
    double wy[4];
    weights(fx, wx);
    weights(fy, wy);
    double v = 0.0;
    for (int b = 0; b < 4; ++b) {
        double row = 0.0;
        for (int a = 0; a < 4; ++a) row += wx[a] * at(i0 - 1 + a, j0 - 1 + b);
        v += wy[b] * row;
    }
    const double c00 = at(i0, j0);
    const double c10 = at(i0 + 1, j0);
    const double c01 = at(i0, j0 + 1);
    const double c11 = at(i0 + 1, j0 + 1);
    const double lo = std::min({c00, c10, c01, c11});
    const double hi = std::max({c00, c10, c01, c11});
    return std::clamp(v, lo, hi);
}

}  // namespace micropol
