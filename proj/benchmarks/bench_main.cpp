#include <benchmark/benchmark.h>

#include <cmath>

#include "micropol/analysis.hpp"
#include "micropol/elliptic.hpp"
#include "micropol/micropolar.hpp"
#include "micropol/stokes.hpp"

using namespace micropol;

namespace {

const double pi = std::acos(-1.0);

SimState reference(int n) {
    const GridSpec g = make_grid(n, n, 1.0, 1.0);
    NodeField psi(g);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) psi(i, j) = std::pow(std::sin(pi * g.xf(i)) * std::sin(pi * g.yf(j)), 2) / pi;
    return {0.0, 0, curl(psi, true),
            ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); })};
}

void BM_PoissonDirichlet(benchmark::State& st) {
    const GridSpec g = make_grid(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 1.0, 1.0);
    const ScalarField rhs = ScalarField::sample(g, [](double x, double y) { return std::exp(x) * y; });
    poisson_dirichlet(rhs);  // transform plans are built on first use
    for (auto _ : st) benchmark::DoNotOptimize(poisson_dirichlet(rhs));
}
BENCHMARK(BM_PoissonDirichlet)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_StokesStationary(benchmark::State& st) {
    const SimState s = reference(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(stokes_stationary(s.u));
}
BENCHMARK(BM_StokesStationary)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_AdvectW(benchmark::State& st) {
    const SimState s = reference(static_cast<int>(st.range(0)));
    const double dt = 0.25 * s.u.grid().h;
    for (auto _ : st) benchmark::DoNotOptimize(advect_w(s.w, s.u, FluidParams{}, dt));
}
BENCHMARK(BM_AdvectW)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& st) {
    const SimState s = reference(static_cast<int>(st.range(0)));
    const double dt = 0.25 * s.u.grid().h;
    for (auto _ : st) benchmark::DoNotOptimize(step(s, FluidParams{}, dt));
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_DiagnosticsObserve(benchmark::State& st) {
    const SimState s0 = reference(static_cast<int>(st.range(0)));
    const double dt = 0.25 * s0.u.grid().h;
    const SimState s1 = step(s0, FluidParams{}, dt);
    for (auto _ : st) {
        DiagnosticsEngine engine(s0, FluidParams{});
        benchmark::DoNotOptimize(engine.observe(s0, s1, dt));
    }
}
BENCHMARK(BM_DiagnosticsObserve)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
