#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "stratwave/consistency.hpp"
#include "stratwave/dispersion.hpp"
#include "stratwave/dtn.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"

using namespace stratwave;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField wave(const GridSpec& g, double a, double k, double ph) {
    return ScalarField::from_function(g, [=](double x, double) { return a * std::cos(k * x + ph); });
}

void BM_StripFactorize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpec g = GridSpec::line(n, kTwoPi);
    const ScalarField h = 1.0 + wave(g, 0.3, 1, 0.2);
    const ScalarField sigma = wave(g, 0.2, 1, 0.7);
    for (auto _ : state) {
        StripProblem p(Layer::Lower, h, sigma, 0.1, n);
        benchmark::DoNotOptimize(p.nz());
    }
}
BENCHMARK(BM_StripFactorize)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_StripSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpec g = GridSpec::line(n, kTwoPi);
    const StripProblem p(Layer::Lower, 1.0 + wave(g, 0.3, 1, 0.2), wave(g, 0.2, 1, 0.7), 0.1, n);
    const ScalarField psi = wave(g, 1.0, 2, 0.4), zero(g, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(p.solve(psi, zero).linear_residual());
}
BENCHMARK(BM_StripSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_FlatG1(benchmark::State& state) {
    const GridSpec g = GridSpec::line(static_cast<int>(state.range(0)), kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.1, 0.1, 0.0);
    const ScalarField psi1 = wave(g, 1.0, 1, 0.0), psi2 = wave(g, 0.5, 3, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(g1_flat(psi1, psi2, p).max_abs());
}
BENCHMARK(BM_FlatG1)->Arg(128)->Arg(1024);

void BM_FullDispersion(benchmark::State& state) {
    const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, 0.1, 0.1, 0.1, 0.0);
    double k = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(full_dispersion(k, p).plus);
        k = k < 15.0 ? k + 0.1 : 0.1;
    }
}
BENCHMARK(BM_FullDispersion);

void BM_ClassifyBoussinesq(benchmark::State& state) {
    const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, 0.1, 0.1, 0.1, 0.0);
    const BoussinesqCoefficients c{0.4714, -0.3942, -1.0};
    for (auto _ : state) benchmark::DoNotOptimize(classify_boussinesq(c, p, 15.0).index());
}
BENCHMARK(BM_ClassifyBoussinesq);

void BM_SwswStep(benchmark::State& state) {
    const GridSpec g = GridSpec::line(static_cast<int>(state.range(0)), kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.1, 0.1, 0.0);
    const SurfaceState s = SurfaceState::from_potentials(wave(g, 0.4, 1, 0.0), wave(g, 0.6, 1, 0.7),
                                                         wave(g, 0.5, 1, 0.2), wave(g, 0.5, 2, 2.0));
    const ScalarField b(g, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(swsw_step(s, b, p, 1e-3).zeta1().max_abs());
}
BENCHMARK(BM_SwswStep)->Arg(128)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_RigidLidQ(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GridSpec g = GridSpec::plane(n, n, kTwoPi, kTwoPi);
    const ScalarField zeta = ScalarField::from_function(g, [](double x, double y) { return 0.3 * std::cos(x) * std::sin(y); });
    const VectorField w(std::vector<ScalarField>{
        ScalarField::from_function(g, [](double x, double y) { return std::sin(x) * std::cos(y); }),
        ScalarField::from_function(g, [](double x, double y) { return std::cos(2.0 * x + y); })});
    for (auto _ : state) benchmark::DoNotOptimize(rigid_lid_solve_q(zeta, w).max_abs());
}
BENCHMARK(BM_RigidLidQ)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SwswResidual(benchmark::State& state) {
    const GridSpec g = family_grid(32);
    const SurfaceState s = family_state(g);
    const ScalarField b = family_bottom(g, Regime::ShallowWater);
    const PhysicalParams p = family_params(Regime::ShallowWater, 1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(residual(ModelSpec::swsw(), s, b, p, 24).total());
}
BENCHMARK(BM_SwswResidual)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
