#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "micropol/norms.hpp"
#include "micropol/stokes.hpp"

using namespace micropol;

namespace {

// psi = (x(1-x)y(1-y))^2, u = (psi_y, -psi_x), p = x^2 - y^2 on the unit square.
double ux_exact(double x, double y) { return 2 * x * x * y * (x - 1) * (x - 1) * (y - 1) * (2 * y - 1); }
double uy_exact(double x, double y) { return -2 * x * y * y * (x - 1) * (2 * x - 1) * (y - 1) * (y - 1); }
double p_exact(double x, double y) { return x * x - y * y; }
double fx_exact(double x, double y) {
    return -2 * (12 * std::pow(x, 4) * y - 6 * std::pow(x, 4) - 24 * std::pow(x, 3) * y + 12 * std::pow(x, 3) +
                 24 * x * x * std::pow(y, 3) - 36 * x * x * y * y + 24 * x * x * y - 6 * x * x - 24 * x * std::pow(y, 3) +
                 36 * x * y * y - 12 * x * y - x + 4 * std::pow(y, 3) - 6 * y * y + 2 * y);
}
double fy_exact(double x, double y) {
    return 2 * (24 * std::pow(x, 3) * y * y - 24 * std::pow(x, 3) * y + 4 * std::pow(x, 3) - 36 * x * x * y * y +
                36 * x * x * y - 6 * x * x + 12 * x * std::pow(y, 4) - 24 * x * std::pow(y, 3) + 24 * x * y * y -
                12 * x * y + 2 * x - 6 * std::pow(y, 4) + 12 * std::pow(y, 3) - 6 * y * y - y);
}

struct Errors {
    double u = 0.0;
    double p = 0.0;
};

Errors manufactured_errors(int n) {
    const GridSpec g = make_grid(n, n, 1.0, 1.0);
    const VelocityField f = VelocityField::sample(g, fx_exact, fy_exact, false);
    const StokesSolveResult r = stokes_stationary(f, 1e-11);
    const VelocityField ue = VelocityField::sample(g, ux_exact, uy_exact, true);
    ScalarField pe = ScalarField::sample(g, p_exact);
    pe -= ScalarField(g, pe.mean());
    return {lp_norm(r.velocity - ue, 2.0), lp_norm(r.pressure - pe, 2.0)};
}

VelocityField random_velocity(const GridSpec& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> d;
    VelocityField u(g, true);
    for (double& x : u.ux_data()) x = d(rng);
    for (double& x : u.uy_data()) x = d(rng);
    u.enforce_no_slip();
    return u;
}

double interior_max(const VelocityField& u) {
    const GridSpec& g = u.grid();
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) m = std::max(m, std::abs(u.ux(i, j)));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) m = std::max(m, std::abs(u.uy(i, j)));
    return m;
}

}  // namespace

TEST(Stokes, ManufacturedSolutionConvergesAtSecondOrder) {
    const Errors e32 = manufactured_errors(32);
    const Errors e64 = manufactured_errors(64);
    EXPECT_GT(std::log2(e32.u / e64.u), 1.8);
    EXPECT_GT(std::log2(e32.p / e64.p), 1.4);
    EXPECT_LT(e64.u, 1e-4);
}

TEST(Stokes, SolutionSatisfiesDiscreteSystem) {
    const GridSpec g = make_grid(24, 24, 1.0, 1.0);
    const VelocityField f = random_velocity(g, 5);
    const double alpha = 40.0, visc = 0.3;
    const StokesSolveResult r = solve_stokes(f, alpha, visc, {.tol = 1e-11});
    VelocityField res = alpha * r.velocity - visc * laplacian_vec(r.velocity) + gradient(r.pressure) - f;
    EXPECT_LT(interior_max(res), 1e-8);
    EXPECT_LT(lp_norm(divergence(r.velocity), 2.0), 1e-10);
    EXPECT_NEAR(r.pressure.mean(), 0.0, 1e-12);
}

TEST(Stokes, LerayProjectionIsDivergenceFreeAndIdempotent) {
    const GridSpec g = make_grid(32, 32, 1.0, 1.0);
    const VelocityField u = random_velocity(g, 9);
    const VelocityField pu = leray_project(u);
    EXPECT_LT(lp_norm(divergence(pu), 2.0), 1e-9);
    EXPECT_LT(lp_norm(leray_project(pu) - pu, 2.0), 1e-9);
    // Orthogonal projection: the removed part is orthogonal to the result.
    EXPECT_NEAR(inner(u - pu, pu), 0.0, 1e-9 * inner(u, u));
}

TEST(Stokes, ConstantMicrorotationDrivesNoFlow) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    const StokesSolveResult r = apply_A_inv_perp(ScalarField(g, 3.0), 1.0, 1e-12);
    EXPECT_LT(lp_norm(r.velocity, INFINITY), 1e-10);
}

TEST(Stokes, UnsteadyStepDissipatesEnergy) {
    const GridSpec g = make_grid(32, 32, 1.0, 1.0);
    const VelocityField u0 = leray_project(random_velocity(g, 13));
    const StokesSolveResult r = stokes_unsteady_step(u0, VelocityField(g, true), 0.01, 0.5, 1e-11);
    const double e0 = inner(u0, u0), e1 = inner(r.velocity, r.velocity);
    const double grad = sobolev_seminorm(r.velocity, 1, 2.0);
    EXPECT_LT(e1, e0);
    // Implicit Euler: (e1 - e0)/(2 dt) + |u1 - u0|^2/(2 dt) + visc |grad u1|^2 = 0.
    const VelocityField du = r.velocity - u0;
    const double balance = (e1 - e0) / 0.02 + inner(du, du) / 0.02 + 0.5 * grad * grad;
    EXPECT_NEAR(balance, 0.0, 1e-6 * e0 / 0.01);
}

TEST(Stokes, LogGradientAuditIsBounded) {
    const GridSpec g = make_grid(32, 32, 1.0, 1.0);
    const ScalarField w = ScalarField::sample(g, [](double x, double y) { return std::sin(6.0 * x) * std::cos(5.0 * y); });
    const LogGradientAudit a = log_gradient_audit(w, 4.0, 1e-11);
    EXPECT_GT(a.grad_u_inf, 0.0);
    EXPECT_NEAR(a.f_inf, lp_norm(w, INFINITY), 1e-12);
    EXPECT_NEAR(a.ratio, a.grad_u_inf / a.bound, 1e-12);
    EXPECT_LT(a.ratio, 1.0);
}
