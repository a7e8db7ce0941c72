#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stratwave/dtn.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/spectral.hpp"
#include "flat_oracle.hpp"

using namespace stratwave;
using namespace stratwave::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField mode(const GridSpec& g, double k, double phase = 0.0) {
    return ScalarField::from_function(g, [=](double x, double) { return std::cos(k * x + phase); });
}

// Applies a per-mode gain from the oracle to a band-limited field.
ScalarField apply_oracle(const ScalarField& f, double mu, double delta,
                         double FlatModeOracle::*member) {
    return apply_multiplier(f, [&](const Wavevector& w) { return flat_oracle(w.kx, mu, delta).*member; });
}

double rel(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs() / std::max(b.max_abs(), 1e-300); }

ScalarField random_potential(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    const double p1 = ph(rng), p2 = ph(rng), p3 = ph(rng);
    return ScalarField::from_function(g, [=](double x, double) {
        return std::cos(x + p1) + 0.5 * std::cos(2.0 * x + p2) + 0.2 * std::cos(4.0 * x + p3);
    });
}

struct Shapes {
    ScalarField zeta1, zeta2, b;
};

Shapes generic_shapes(const GridSpec& g) {
    return {ScalarField::from_function(g, [](double x, double) { return 0.4 * std::cos(x) + 0.1 * std::sin(2.0 * x); }),
            ScalarField::from_function(g, [](double x, double) { return 0.6 * std::cos(x + 0.7); }),
            ScalarField::from_function(g, [](double x, double) { return 0.5 * std::cos(x - 0.3); })};
}

}  // namespace

TEST_CASE("g2_flat: single mode, constants and small-k limit") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, 0.1, 0.1, 0.1, 0.0);
    for (int k : {1, 3, 7}) {
        const ScalarField psi = mode(g, k, 0.3);
        const double gain = std::sqrt(0.1) * k * std::tanh(3.0 * std::sqrt(0.1) * k);
        CHECK(rel(g2_flat(psi, p), gain * psi) <= 1e-13);
    }
    CHECK(g2_flat(ScalarField(g, 2.0), p).max_abs() == 0.0);

    // Long domain so that the fundamental has small k.
    const GridSpec wide = GridSpec::line(16, kTwoPi * 1000.0);
    const ScalarField psi = mode(wide, 1e-3);
    const ScalarField out = g2_flat(psi, p);
    const double ratio = out.max_abs() / (0.1 * 1e-6 / (1.0 / 3.0) * psi.max_abs());
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("g1_flat and h_flat match the per-mode boundary value oracle") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    std::mt19937_64 rng(1);
    for (double mu : {0.01, 0.1, 1.0}) {
        for (double delta : {1.0 / 3.0, 1.0, 2.5}) {
            const PhysicalParams p(0.5, delta, mu, 0.1, 0.1, 0.0);
            const ScalarField psi1 = random_potential(g, rng), psi2 = random_potential(g, rng);
            CHECK(rel(g2_flat(psi2, p), apply_oracle(psi2, mu, delta, &FlatModeOracle::g2_psi2)) <= 1e-12);
            const ScalarField g1 = apply_oracle(psi1, mu, delta, &FlatModeOracle::g1_psi1) +
                                   apply_oracle(psi2, mu, delta, &FlatModeOracle::g1_psi2);
            CHECK(rel(g1_flat(psi1, psi2, p), g1) <= 1e-12);
            const ScalarField trace = apply_oracle(psi1, mu, delta, &FlatModeOracle::h_psi1) +
                                      apply_oracle(psi2, mu, delta, &FlatModeOracle::h_psi2);
            CHECK((h_flat(psi1, psi2, p)[0] - grad(trace)[0]).max_abs() <= 1e-12 * grad(trace)[0].max_abs());
        }
    }
    const PhysicalParams p(0.5, 0.5, 0.1, 0.1, 0.1, 0.0);
    const ScalarField c(g, 1.0), z(g, 0.0);
    CHECK(g1_flat(z, c, p).max_abs() == 0.0);
    CHECK(h_flat(z, c, p).max_abs() == 0.0);
    // psi2 = 0: G1 = x tanh(x) psi1, H scaled by 1/cosh(x).
    const ScalarField m = mode(g, 2.0);
    const double x = std::sqrt(0.1) * 2.0;
    CHECK(rel(g1_flat(m, z, p), x * std::tanh(x) * m) <= 1e-13);
    CHECK((h_flat(m, z, p)[0] - grad(m)[0] * (1.0 / std::cosh(x))).max_abs() <= 1e-13);
}

TEST_CASE("strip solver: flat configuration agrees with the multipliers") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.3);
    std::mt19937_64 rng(2);
    const ScalarField psi1 = random_potential(g, rng), psi2 = random_potential(g, rng);
    const ScalarField z(g, 0.0);
    const NumericOperators ops = numeric_operators(SurfaceState::from_potentials(z, z, psi1, psi2), z, p, 32);
    CHECK(rel(ops.g2, g2_flat(psi2, p)) <= 1e-6);
    CHECK(rel(ops.g1, g1_flat(psi1, psi2, p)) <= 1e-6);
    CHECK((ops.h[0] - h_flat(psi1, psi2, p)[0]).max_abs() <= 1e-6 * h_flat(psi1, psi2, p)[0].max_abs());
}

TEST_CASE("strip solver: constant potentials carry no flux") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.3);
    const Shapes s = generic_shapes(g);
    const ScalarField c(g, 1.5);
    const NumericOperators ops = numeric_operators(SurfaceState::from_potentials(s.zeta1, s.zeta2, c, c), s.b, p, 24);
    CHECK(ops.g1.max_abs() <= 1e-12);
    CHECK(ops.g2.max_abs() <= 1e-12);
    CHECK(ops.h.max_abs() <= 1e-12);
    CHECK(mean_velocity(ops.lower).max_abs() <= 1e-12);
    CHECK(mean_velocity(ops.upper).max_abs() <= 1e-12);
}

TEST_CASE("strip solver: self-consistency on generic shapes") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.3);
    const Shapes s = generic_shapes(g);
    std::mt19937_64 rng(3);
    const ScalarField psi1 = random_potential(g, rng), psi2 = random_potential(g, rng);
    const StripSolution lower = solve_lower(s.zeta2, s.b, psi2, p, 32);
    const StripSolution upper = solve_upper(s.zeta1, s.zeta2, s.b, psi1, psi2, p, 32);

    CHECK(lower.pde_residual() <= 1e-10);
    CHECK(upper.pde_residual() <= 1e-10);
    CHECK(lower.linear_residual() <= kStripTolerance);

    ScalarField psi2_zero_mean = psi2;
    psi2_zero_mean += -psi2.mean();
    CHECK((lower.trace_top() - psi2_zero_mean).max_abs() <= 1e-10);
    CHECK((upper.trace_top() - psi1).max_abs() <= 1e-10);
    CHECK(lower.conormal_bottom().max_abs() <= 1e-10);
    CHECK((upper.conormal_bottom() - lower.conormal_top()).max_abs() <= 1e-8);

    const auto [h1, h2] = thicknesses(s.zeta1, s.zeta2, s.b, p);
    CHECK((lower.thickness() - h2).max_abs() <= 1e-14);
    CHECK((upper.thickness() - h1).max_abs() <= 1e-14);

    const StripProblem problem(Layer::Lower, h2, p.eps2() * s.zeta2, p.mu(), 16);
    CHECK(problem.min_coercivity() > 0.0);
}

TEST_CASE("strip solver: spectral convergence in nz") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.3);
    const Shapes s = generic_shapes(g);
    std::mt19937_64 rng(4);
    const ScalarField psi2 = random_potential(g, rng);
    auto g2 = [&](int nz) { return solve_lower(s.zeta2, s.b, psi2, p, nz).conormal_top(); };
    const ScalarField a = g2(8), b = g2(16), c = g2(32);
    const double d1 = (a - b).max_abs(), d2 = (b - c).max_abs();
    CHECK(d1 > 0.0);
    CHECK(d2 <= 0.1 * d1);
}

TEST_CASE("strip solver: linear in the potentials") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.3);
    const Shapes s = generic_shapes(g);
    const TwoLayerStrips strips(s.zeta1, s.zeta2, s.b, p, 24);
    std::mt19937_64 rng(5);
    const ScalarField a1 = random_potential(g, rng), a2 = random_potential(g, rng);
    const ScalarField b1 = random_potential(g, rng), b2 = random_potential(g, rng);
    const double ca = 0.7, cb = -1.3;
    const NumericOperators oa = strips.apply(a1, a2), ob = strips.apply(b1, b2);
    const NumericOperators os = strips.apply(ca * a1 + cb * b1, ca * a2 + cb * b2);
    CHECK(rel(os.g1, ca * oa.g1 + cb * ob.g1) <= 1e-10);
    CHECK(rel(os.g2, ca * oa.g2 + cb * ob.g2) <= 1e-10);
    CHECK(rel(os.h[0], ca * oa.h[0] + cb * ob.h[0]) <= 1e-10);
}

TEST_CASE("strip solver: translation equivariance") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.3);
    const Shapes s = generic_shapes(g);
    std::mt19937_64 rng(6);
    const ScalarField psi1 = random_potential(g, rng), psi2 = random_potential(g, rng);
    const NumericOperators o = numeric_operators(SurfaceState::from_potentials(s.zeta1, s.zeta2, psi1, psi2), s.b, p, 24);
    const int sh = 7;
    const NumericOperators t = numeric_operators(
        SurfaceState::from_potentials(translate(s.zeta1, sh), translate(s.zeta2, sh), translate(psi1, sh),
                                      translate(psi2, sh)),
        translate(s.b, sh), p, 24);
    CHECK(rel(t.g1, translate(o.g1, sh)) <= 1e-10);
    CHECK(rel(t.g2, translate(o.g2, sh)) <= 1e-10);
}

TEST_CASE("strip solver: preconditions") {
    const GridSpec g = GridSpec::line(16, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 1.0, 0.3);
    const ScalarField z(g, 0.0), psi = mode(g, 1.0);
    CHECK_THROWS_AS(solve_lower(ScalarField(g, -2.5), z, psi, p, 16), ConnectednessViolation);
    CHECK_THROWS_AS(solve_lower(z, z, psi, p, 6), InvalidArgument);
    const GridSpec g2 = GridSpec::plane(8, 8, 1.0, 1.0);
    CHECK_THROWS_AS(solve_lower(ScalarField(g2), ScalarField(g2), ScalarField(g2), p, 16), Unsupported);
}

TEST_CASE("mean velocity: flat single modes and divergence identities") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const double mu = 0.1, delta = 0.5;
    const PhysicalParams p(0.8, delta, mu, 0.3, 0.3, 0.3);
    const ScalarField z(g, 0.0);
    for (double k : {1.0, 3.0}) {
        const ScalarField m = mode(g, k, 0.2);
        const FlatModeOracle o = flat_oracle(k, mu, delta);
        const NumericOperators lower_only = numeric_operators(SurfaceState::from_potentials(z, z, z, m), z, p, 32);
        CHECK((mean_velocity(lower_only.lower)[0] - o.mean2 * grad(m)[0]).max_abs() <= 1e-9);
        const double x = std::sqrt(mu) * k;
        CHECK(o.mean2 == doctest::Approx(std::tanh(x / delta) / (x / delta)).epsilon(1e-12));
        const NumericOperators upper_only = numeric_operators(SurfaceState::from_potentials(z, z, m, z), z, p, 32);
        CHECK((mean_velocity(upper_only.upper)[0] - o.mean1 * grad(m)[0]).max_abs() <= 1e-9);
    }

    const Shapes s = generic_shapes(g);
    std::mt19937_64 rng(8);
    const ScalarField psi1 = random_potential(g, rng), psi2 = random_potential(g, rng);
    const NumericOperators ops = numeric_operators(SurfaceState::from_potentials(s.zeta1, s.zeta2, psi1, psi2), s.b, p, 32);
    const auto [h1, h2] = thicknesses(s.zeta1, s.zeta2, s.b, p);
    const ScalarField lhs2 = div(h2 * mean_velocity(ops.lower));
    CHECK((lhs2 + (1.0 / mu) * ops.g2).max_abs() <= 1e-8);
    const ScalarField lhs1 = div(h1 * mean_velocity(ops.upper));
    CHECK((lhs1 + (1.0 / mu) * (ops.g1 - ops.g2)).max_abs() <= 1e-8);
}

TEST_CASE("t_operator: single-mode rule and vanishing cases") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const double delta = 1.0 / 3.0;
    const ScalarField h(g, 1.0 / delta), zero(g, 0.0);
    for (double k : {1.0, 2.0, 5.0}) {
        const VectorField v = grad(mode(g, k));
        const VectorField t = t_operator(h, zero, v);
        CHECK((t[0] - (k * k / (3.0 * delta * delta * delta)) * v[0]).max_abs() <= 1e-10 * k * k * k * 27.0);
    }
    CHECK(t_operator(h, zero, VectorField(g)).max_abs() == 0.0);
    VectorField constant(std::vector<ScalarField>{ScalarField(g, 0.7)});
    CHECK(t_operator(h, zero, constant).max_abs() <= 1e-13);
}

TEST_CASE("expansions: flat single modes against Taylor coefficients of the exact symbols") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const double mu = 0.05, delta = 0.5, k = 2.0;
    const PhysicalParams p(0.8, delta, mu, 0.3, 0.3, 0.0);
    const ScalarField z(g, 0.0), m = mode(g, k, 0.4);
    const double y = mu * k * k;
    const SurfaceState lower_only = SurfaceState::from_potentials(z, z, z, m);
    const SurfaceState upper_only = SurfaceState::from_potentials(z, z, m, z);
    const double tol = 1e-11;

    // x tanh(x / delta) = y / delta - y^2 / (3 delta^3) + ...
    CHECK(rel(expand_g2(lower_only, z, p, 1), (y / delta) * m) <= tol);
    CHECK(rel(expand_g2(lower_only, z, p, 2), (y / delta - y * y / (3.0 * delta * delta * delta)) * m) <= tol);
    // x tanh(x) = y - y^2 / 3 + ...
    CHECK(rel(expand_g1(upper_only, z, p, 1), y * m) <= tol);
    CHECK(rel(expand_g1(upper_only, z, p, 2), (y - y * y / 3.0) * m) <= tol);
    // x tanh(x / delta) / cosh(x) = y / delta - y^2 (1 / (3 delta^3) + 1 / (2 delta)) + ...
    CHECK(rel(expand_g1(lower_only, z, p, 2),
              (y / delta - y * y * (1.0 / (3.0 * delta * delta * delta) + 0.5 / delta)) * m) <= tol);
    // 1 / cosh(x) = 1 - y / 2; -tanh(x / delta) tanh(x) = -y / delta.
    const ScalarField dm = grad(m)[0];
    CHECK((expand_h(upper_only, z, p, 0)[0] - dm).max_abs() <= tol);
    CHECK((expand_h(upper_only, z, p, 1)[0] - (1.0 - y / 2.0) * dm).max_abs() <= tol);
    CHECK((expand_h(lower_only, z, p, 1)[0] + (y / delta) * dm).max_abs() <= tol);
    // tanh(x / delta) / (x / delta) = 1 - y / (3 delta^2): D2 = -k^2 / (3 delta^2) grad psi2.
    CHECK((layer_mean_correction(lower_only, z, p, 2)[0] + (k * k / (3.0 * delta * delta)) * dm).max_abs() <= tol);
    // tanh(x) / x = 1 - y / 3: D1 = -k^2 / 3 grad psi1 for psi2 = 0.
    CHECK((layer_mean_correction(upper_only, z, p, 1)[0] + (k * k / 3.0) * dm).max_abs() <= tol);

    const ScalarField c(g, 3.0);
    const SurfaceState still = SurfaceState::from_potentials(z, z, c, c);
    for (int order : {1, 2}) {
        CHECK(expand_g1(still, z, p, order).max_abs() == 0.0);
        CHECK(expand_g2(still, z, p, order).max_abs() == 0.0);
    }
    CHECK(expand_h(still, z, p, 1).max_abs() == 0.0);
    CHECK(layer_mean_correction(still, z, p, 1).max_abs() == 0.0);
    CHECK_THROWS_AS(expand_g2(still, z, p, 3), InvalidArgument);
    CHECK_THROWS_AS(expand_h(still, z, p, 2), InvalidArgument);
}

TEST_CASE("expansion error decreases with mu at the claimed rate") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const Shapes s = generic_shapes(g);
    std::mt19937_64 rng(10);
    const SurfaceState st = SurfaceState::from_potentials(s.zeta1, s.zeta2, random_potential(g, rng),
                                                          random_potential(g, rng));
    const PhysicalParams base(0.8, 0.5, 0.01, 0.3, 0.3, 0.3);
    const double e_small = expansion_error(ExpandedOperator::G2, 1, st, s.b, base.with_mu(0.01), 24);
    const double e_large = expansion_error(ExpandedOperator::G2, 1, st, s.b, base.with_mu(0.1), 24);
    const double slope = std::log(e_large / e_small) / std::log(10.0);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
    CHECK(expansion_orders(ExpandedOperator::H) == std::pair<int, int>{0, 1});
    CHECK(expansion_orders(ExpandedOperator::G1) == std::pair<int, int>{1, 2});
}
