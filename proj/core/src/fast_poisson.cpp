#include "fast_poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

namespace micropol::detail {

namespace {

using PlanKey = std::tuple<int, int, int, int, int>;  // length, howmany, stride, dist, kind

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// Plans are created once per shape and shared; fftw_execute_r2r on distinct
// arrays is thread-safe, planning is not.
fftw_plan cached_plan(int length, int howmany, int stride, int dist, fftw_r2r_kind kind) {
    static std::map<PlanKey, fftw_plan> cache;
    const PlanKey key{length, howmany, stride, dist, static_cast<int>(kind)};
    std::lock_guard lock(plan_mutex());
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<double> scratch(static_cast<std::size_t>(length) * howmany * std::max(stride, 1) + dist * howmany);
    fftw_plan p = fftw_plan_many_r2r(1, &length, howmany, scratch.data(), nullptr, stride, dist, scratch.data(),
                                     nullptr, stride, dist, &kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

fftw_r2r_kind forward_kind(AxisKind k) {
    switch (k) {
        case AxisKind::CellDirichlet: return FFTW_RODFT10;
        case AxisKind::CellNeumann: return FFTW_REDFT10;
        case AxisKind::NodeDirichlet: return FFTW_RODFT00;
    }
    return FFTW_RODFT00;
}

fftw_r2r_kind inverse_kind(AxisKind k) {
    switch (k) {
        case AxisKind::CellDirichlet: return FFTW_RODFT01;
        case AxisKind::CellNeumann: return FFTW_REDFT01;
        case AxisKind::NodeDirichlet: return FFTW_RODFT00;
    }
    return FFTW_RODFT00;
}

// h^2-scaled eigenvalues of the 1D negative second difference.
std::vector<double> eigenvalues(AxisKind kind, int cells) {
    const int m = axis_unknowns(kind, cells);
    std::vector<double> lam(m);
    for (int k = 0; k < m; ++k) {
        const int freq = (kind == AxisKind::CellNeumann) ? k : k + 1;
        const double s = std::sin(std::numbers::pi * freq / (2.0 * cells));
        lam[k] = 4.0 * s * s;
    }
    return lam;
}

void transform(std::span<double> data, int mx, int my, bool along_x, fftw_r2r_kind kind) {
    fftw_plan p = along_x ? cached_plan(mx, my, 1, mx, kind) : cached_plan(my, mx, mx, 1, kind);
    fftw_execute_r2r(p, data.data(), data.data());
}

}  // namespace

int axis_unknowns(AxisKind kind, int cells) { return kind == AxisKind::NodeDirichlet ? cells - 1 : cells; }

void solve_helmholtz(std::span<double> data, int cells_x, int cells_y, AxisKind kx, AxisKind ky, double h,
                     double alpha, double beta) {
    const int mx = axis_unknowns(kx, cells_x);
    const int my = axis_unknowns(ky, cells_y);
    transform(data, mx, my, true, forward_kind(kx));
    transform(data, mx, my, false, forward_kind(ky));

    const std::vector<double> lx = eigenvalues(kx, cells_x);
    const std::vector<double> ly = eigenvalues(ky, cells_y);
    const double norm = 1.0 / (2.0 * cells_x * 2.0 * cells_y);
    const double bh = beta / (h * h);
    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < mx; ++i) {
            const double d = alpha + bh * (lx[i] + ly[j]);
            double& v = data[static_cast<std::size_t>(j) * mx + i];
            v = (d == 0.0) ? 0.0 : v * norm / d;
        }
    }
    transform(data, mx, my, false, inverse_kind(ky));
    transform(data, mx, my, true, inverse_kind(kx));
}

void apply_helmholtz(std::span<const double> in, std::span<double> out, int cells_x, int cells_y, AxisKind kx,
                     AxisKind ky, double h, double alpha, double beta) {
    const int mx = axis_unknowns(kx, cells_x);
    const int my = axis_unknowns(ky, cells_y);
    auto at = [&](int i, int j) { return in[static_cast<std::size_t>(j) * mx + i]; };
    auto neighbour = [](AxisKind k, double self, int idx, int m, auto&& fetch) {
        if (idx >= 0 && idx < m) return fetch(idx);
        switch (k) {
            case AxisKind::CellDirichlet: return -self;
            case AxisKind::CellNeumann: return self;
            case AxisKind::NodeDirichlet: return 0.0;
        }
        return 0.0;
    };
    const double bh = beta / (h * h);
    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < mx; ++i) {
            const double c = at(i, j);
            const double l = neighbour(kx, c, i - 1, mx, [&](int q) { return at(q, j); });
            const double r = neighbour(kx, c, i + 1, mx, [&](int q) { return at(q, j); });
            const double b = neighbour(ky, c, j - 1, my, [&](int q) { return at(i, q); });
            const double t = neighbour(ky, c, j + 1, my, [&](int q) { return at(i, q); });
            out[static_cast<std::size_t>(j) * mx + i] = alpha * c - bh * (l + r + b + t - 4.0 * c);
        }
    }
}

}  // namespace micropol::detail
