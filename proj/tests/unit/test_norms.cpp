#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "micropol/grid.hpp"
#include "micropol/norms.hpp"

using namespace micropol;

namespace {

const double pi = std::acos(-1.0);

ScalarField bump(const GridSpec& g) {
    return ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
}

}  // namespace

TEST(Norms, LebesgueNormsOfSineProduct) {
    const GridSpec g = make_grid(32, 32, 1.0, 1.0);
    const ScalarField f = bump(g);
    EXPECT_NEAR(lp_norm(f, 2.0), 0.5, 1e-13);
    EXPECT_NEAR(lp_norm(f, 4.0), std::sqrt(3.0 / 8.0), 1e-13);
    EXPECT_NEAR(lp_norm(f, INFINITY), std::pow(std::cos(pi / 64.0), 2), 1e-14);
}

TEST(Norms, ConstantNormScalesWithArea) {
    const GridSpec g = make_grid(16, 32, 0.5, 1.0);
    const ScalarField one(g, 1.0);
    for (double p : {1.0, 2.0, 3.5, 8.0}) EXPECT_NEAR(lp_norm(one, p), std::pow(0.5, 1.0 / p), 1e-12)
        << "p = " << p;
}

TEST(Norms, RejectsExponentBelowOne) {
    const GridSpec g = make_grid(8, 8, 1.0, 1.0);
    EXPECT_THROW(lp_norm(ScalarField(g, 1.0), 0.5), std::domain_error);
    EXPECT_THROW(sobolev_seminorm(ScalarField(g, 1.0), 3, 2.0), std::invalid_argument);
}

TEST(Norms, GradientSeminormConvergesToAnalyticValue) {
    auto err = [](int n) {
        const GridSpec g = make_grid(n, n, 1.0, 1.0);
        return std::abs(sobolev_seminorm(bump(g), 1, 2.0) - pi / std::sqrt(2.0));
    };
    EXPECT_LT(err(64), 2e-2);
    EXPECT_GT(std::log2(err(32) / err(64)), 1.5);
}

TEST(Norms, VelocityGradientSeminormMatchesLaplacianPairing) {
    const GridSpec g = make_grid(24, 24, 1.0, 1.0);
    std::mt19937 rng(11);
    std::normal_distribution<double> d;
    VelocityField u(g, true);
    for (double& x : u.ux_data()) x = d(rng);
    for (double& x : u.uy_data()) x = d(rng);
    u.enforce_no_slip();
    const double s = sobolev_seminorm(u, 1, 2.0);
    EXPECT_NEAR(s * s, -inner(laplacian_vec(u), u), 1e-10 * s * s);
    EXPECT_NEAR(lp_norm(u, 2.0), std::sqrt(inner(u, u)), 1e-12);
}

TEST(Norms, HigherDerivativeOfQuadraticVanishes) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    const ScalarField f = ScalarField::sample(g, [](double x, double y) { return x * x + x * y; });
    EXPECT_LT(derivative_norm(f, 3, 2.0), 1e-9);
    // Hessian [[2, 1], [1, 0]] has Frobenius norm sqrt 6.
    EXPECT_NEAR(derivative_norm(f, 2, 2.0), std::sqrt(6.0), 1e-9);
}
