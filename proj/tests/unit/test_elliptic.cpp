#include <gtest/gtest.h>

#include <cmath>

#include "micropol/elliptic.hpp"
#include "micropol/norms.hpp"

using namespace micropol;

namespace {

const double pi = std::acos(-1.0);

double sine_error(int n) {
    const GridSpec g = make_grid(n, n, 1.0, 1.0);
    auto f = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    const ScalarField rhs = 2.0 * pi * pi * ScalarField::sample(g, f);
    const ScalarField sol = poisson_dirichlet(rhs).solution;
    return lp_norm(sol - ScalarField::sample(g, f), 2.0);
}

double cosine_error(int n) {
    const GridSpec g = make_grid(n, n, 1.0, 1.0);
    auto f = [](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); };
    const ScalarField rhs = 2.0 * pi * pi * ScalarField::sample(g, f);
    const ScalarField sol = poisson_neumann(rhs, NeumannData::zero(g)).solution;
    return lp_norm(sol - ScalarField::sample(g, f), 2.0);
}

}  // namespace

TEST(Elliptic, DirichletSolveIsSecondOrder) {
    EXPECT_LT(sine_error(64), 5e-4);
    EXPECT_GT(std::log2(sine_error(32) / sine_error(64)), 1.9);
}

TEST(Elliptic, NeumannSolveIsSecondOrder) {
    EXPECT_LT(cosine_error(64), 5e-4);
    EXPECT_GT(std::log2(cosine_error(32) / cosine_error(64)), 1.9);
}

TEST(Elliptic, DirichletSolutionSatisfiesDiscreteOperator) {
    const GridSpec g = make_grid(24, 24, 1.0, 1.0);
    const ScalarField rhs = ScalarField::sample(g, [](double x, double y) { return std::exp(x) * (1.0 + y * y); });
    const EllipticSolveResult r = poisson_dirichlet(rhs, {.tol = 1e-12});
    const ScalarField back = laplacian(r.solution, ScalarGhost::Dirichlet) + rhs;
    EXPECT_LT(lp_norm(back, 2.0), 1e-10);
    EXPECT_LE(r.iterations, 3);
}

TEST(Elliptic, UnpreconditionedPathAgrees) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    const ScalarField rhs = ScalarField::sample(g, [](double x, double y) { return x - y * y; });
    const ScalarField a = poisson_dirichlet(rhs, {.tol = 1e-12}).solution;
    const EllipticSolveResult b = poisson_dirichlet(rhs, {.tol = 1e-12, .preconditioned = false});
    EXPECT_LT(lp_norm(a - b.solution, 2.0), 1e-10);
    EXPECT_GT(b.iterations, 3);
}

TEST(Elliptic, NeumannReportsIncompatibleData) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    NeumannData flux = NeumannData::zero(g);
    for (double& v : flux.top) v = 0.5;
    // Integral of g plus boundary flux: 2 * 1 + 0.5 * 1.
    const EllipticSolveResult r = poisson_neumann(ScalarField(g, 2.0), flux);
    EXPECT_NEAR(r.projection, 2.5, 1e-12);
    EXPECT_NEAR(r.solution.mean(), 0.0, 1e-12);
}

TEST(Elliptic, NeumannFluxMatchesLinearSolution) {
    const GridSpec g = make_grid(16, 16, 1.0, 1.0);
    NeumannData flux = NeumannData::zero(g);
    for (double& v : flux.left) v = -1.0;
    for (double& v : flux.right) v = 1.0;
    // -Lap f = 0 with df/dn = +-1 on the vertical walls: f = x - 1/2.
    const ScalarField sol = poisson_neumann(ScalarField(g), flux, {.tol = 1e-12}).solution;
    const ScalarField expect = ScalarField::sample(g, [](double x, double) { return x - 0.5; });
    EXPECT_LT(lp_norm(sol - expect, INFINITY), 1e-10);
}

TEST(Elliptic, DiscreteH2NormApproachesAnalyticValue) {
    const GridSpec g = make_grid(128, 128, 1.0, 1.0);
    const ScalarField f = ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    const double exact = std::sqrt(0.25 + pi * pi / 2.0 + std::pow(pi, 4));
    EXPECT_NEAR(discrete_h2_norm(f), exact, 0.01 * exact);
}
