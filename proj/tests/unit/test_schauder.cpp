#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "micropol/norms.hpp"
#include "micropol/schauder.hpp"

using namespace micropol;

namespace {

const double pi = std::acos(-1.0);

VelocityField swirl(const GridSpec& g, double amplitude) {
    NodeField psi(g);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            psi(i, j) = amplitude * std::pow(std::sin(pi * g.xf(i)) * std::sin(pi * g.yf(j)), 2) / pi;
    return curl(psi, true);
}

ScalarField hump(const GridSpec& g, double amplitude) {
    return ScalarField::sample(g, [=](double x, double y) { return amplitude * std::sin(pi * x) * std::sin(pi * y); });
}

}  // namespace

TEST(Schauder, MollifierWeightsFormTruncatedGaussian) {
    const double h = 1.0 / 64.0, eps = 4.0 * h;
    const std::vector<double> w = mollifier_weights({eps}, h);
    ASSERT_EQ(w.size(), 33u);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-14);
    double second = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        EXPECT_DOUBLE_EQ(w[k], w[w.size() - 1 - k]);
        const double x = (static_cast<double>(k) - 16.0) * h;
        second += w[k] * x * x;
    }
    EXPECT_NEAR(std::sqrt(second), eps, 0.01 * eps);
}

TEST(Schauder, MollifierActsOnCosineModesByGaussianMultiplier) {
    const GridSpec g = make_grid(64, 64, 1.0, 1.0);
    const double eps = 3.0 * g.h;
    const int k = 3;
    const ScalarField f = ScalarField::sample(g, [&](double x, double) { return std::cos(k * pi * x); });
    const std::vector<double> w = mollifier_weights({eps}, g.h);
    const int r = static_cast<int>(w.size() / 2);
    double multiplier = 0.0;
    for (int m = -r; m <= r; ++m) multiplier += w[static_cast<std::size_t>(m + r)] * std::cos(k * pi * m * g.h);
    // Truncation at 4 epsilon drops Gaussian mass erfc(2 sqrt 2) ~ 6.3e-5.
    EXPECT_NEAR(multiplier, std::exp(-0.5 * std::pow(k * pi * eps, 2)), std::erfc(2.0 * std::sqrt(2.0)));
    const ScalarField smooth = mollify(f, {eps});
    EXPECT_LT(lp_norm(smooth - multiplier * f, INFINITY), 1e-13);
}

TEST(Schauder, MollifierPreservesMeanAndMaximum) {
    const GridSpec g = make_grid(32, 32, 1.0, 1.0);
    const ScalarField f = ScalarField::sample(g, [](double x, double y) { return std::exp(3.0 * x) * (y < 0.4 ? 1.0 : -0.5); });
    const ScalarField s = mollify(f, {2.5 * g.h});
    EXPECT_NEAR(s.mean(), f.mean(), 1e-13);
    EXPECT_LE(lp_norm(s, INFINITY), lp_norm(f, INFINITY));
    const ScalarField id = mollify(f, {0.5 * g.h});
    EXPECT_EQ(id.data(), f.data());
}

TEST(Schauder, MollifiedVelocityIsAdmissible) {
    const GridSpec g = make_grid(32, 32, 1.0, 1.0);
    const VelocityField v = mollify(swirl(g, 1.0), {2.0 * g.h});
    EXPECT_LT(lp_norm(divergence(v), 2.0), 1e-9);
    EXPECT_TRUE(v.no_slip());
    EXPECT_LT(lp_norm(v - swirl(g, 1.0), 2.0), 0.2 * lp_norm(swirl(g, 1.0), 2.0));
}

TEST(Schauder, LinearisedTransportDampsWithoutFlow) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    const FluidParams p{0.1, 0.25};
    const std::vector<VelocityField> v(5, VelocityField(g, true));
    const auto w = solve_transport_linearized(hump(g, 1.0), v, p, 0.01);
    ASSERT_EQ(w.size(), 6u);
    EXPECT_LT(lp_norm(w.back() - std::exp(-4.0 * p.kappa * 0.05) * hump(g, 1.0), INFINITY), 1e-13);
}

TEST(Schauder, PicardIterationReachesDirectSolution) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    const FluidParams p{0.1, 0.1};
    const VelocityField u0 = swirl(g, 0.1);
    const ScalarField w0 = hump(g, 0.1);
    const double T = 0.125;
    const FixedPointResult r = fixed_point_solve(u0, w0, p, T);
    EXPECT_TRUE(r.report.converged);
    ASSERT_GE(r.report.distances.size(), 3u);
    for (std::size_t n = 1; n < r.report.distances.size(); ++n)
        EXPECT_LT(r.report.distances[n], r.report.distances[n - 1]);
    EXPECT_LT(r.report.distances.back(), 1e-8);

    const double dt = r.trajectory.dt;
    EXPECT_DOUBLE_EQ(dt, 0.25 * g.h);
    const Trajectory direct = direct_trajectory(u0, w0, p, T, dt);
    ASSERT_EQ(direct.u.size(), r.trajectory.u.size());
    EXPECT_LT(sup_l2_distance(direct.u, r.trajectory.u), 5.0 * (g.h + dt));
    EXPECT_EQ(sup_l2_distance(direct.u, direct.u), 0.0);
    EXPECT_DOUBLE_EQ(r.report.r0_check.r0, 10.0 * (inner(u0, u0) + inner(w0, w0)));
}

TEST(Schauder, PicardReportsNonConvergenceWhenCapped) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    FixedPointOptions opts;
    opts.max_iterations = 1;
    opts.guess = InitialGuess::Zero;
    const FixedPointResult r = fixed_point_solve(swirl(g, 1.0), hump(g, 1.0), FluidParams{0.1, 0.1}, 0.125, opts);
    EXPECT_FALSE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1);
}

TEST(Schauder, UniquenessProbeIsLinearInPerturbation) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    const FluidParams p{0.1, 0.1};
    const double dt = 0.25 * g.h;
    const UniquenessReport a = uniqueness_probe(swirl(g, 1.0), hump(g, 1.0), 1e-3, p, 0.125, dt);
    const UniquenessReport b = uniqueness_probe(swirl(g, 1.0), hump(g, 1.0), 1e-4, p, 0.125, dt);
    // |delta sin(2 pi x) sin(pi y)|^2 = delta^2 / 4 by midpoint quadrature.
    EXPECT_NEAR(a.distance.front(), 0.25e-6, 1e-18);
    EXPECT_NEAR(a.growth, b.growth, 1e-3 * a.growth);
    EXPECT_LT(a.growth, 1.0);
    EXPECT_EQ(a.violations, 0);
}
