#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <variant>

#include "linear_modes.hpp"
#include "stratwave/dispersion.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"

using namespace stratwave;
using namespace stratwave::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PhysicalParams linear_params(double gamma, double delta, double mu) {
    PhysicalParams::Options o;
    o.alpha = 1.0;
    return {gamma, delta, mu, 0.0, 0.0, 0.0, o};
}

SurfaceState smooth_state(const GridSpec& g, double amp) {
    auto f = [&](double a, double k, double ph) {
        return ScalarField::from_function(g, [=](double x, double) { return amp * a * std::cos(k * x + ph); });
    };
    return SurfaceState::from_potentials(f(0.4, 1, 0.0), f(0.6, 1, 0.7), f(0.5, 1, 0.2) + f(0.25, 2, 1.1),
                                         f(0.5, 1, 2.0) + f(0.25, 2, -0.4));
}

double tangent_max(const SurfaceTangent& t) { return t.max_abs(); }

double max_asymmetry(const Matrix6& m) {
    double a = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a = std::max(a, std::abs(m[i * 6 + j] - m[j * 6 + i]));
    return a;
}

Matrix6 product(const Matrix6& a, const Matrix6& b) {
    Matrix6 c{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int l = 0; l < 6; ++l) c[i * 6 + j] += a[i * 6 + l] * b[l * 6 + j];
    return c;
}

QuasilinearState single_node(double h1, double h2, std::array<double, 2> u1, std::array<double, 2> u2) {
    const GridSpec g = GridSpec::plane(8, 8, 1.0, 1.0);
    auto c = [&](double v) { return ScalarField(g, v); };
    return {c(h1), c(h2), VectorField(std::vector<ScalarField>{c(u1[0]), c(u1[1])}),
            VectorField(std::vector<ScalarField>{c(u2[0]), c(u2[1])}), std::nullopt};
}

}  // namespace

// ---------------------------------------------------------------------------
// Shallow water / shallow water.

TEST_CASE("swsw: rest state, single mode and divergence form") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, 0.1, 0.2, 0.1, 0.3);
    const ScalarField bottom = ScalarField::from_function(g, [](double x, double) { return std::cos(x); });
    CHECK(tangent_max(swsw_rhs(SurfaceState::rest(g), ScalarField(g), p)) == 0.0);

    PhysicalParams::Options o;
    o.alpha = 2.0;
    const PhysicalParams lin(2.0 / 3.0, 1.0 / 3.0, 0.1, 0.0, 0.0, 0.0, o);
    const double k = 3.0;
    const ScalarField psi = ScalarField::from_function(g, [=](double x, double) { return std::cos(k * x); });
    const ScalarField z(g);
    const SurfaceTangent t = swsw_rhs(SurfaceState::from_potentials(z, z, psi, z), z, lin);
    CHECK((t.dzeta1 - (k * k / 2.0) * psi).max_abs() <= 1e-12);
    CHECK(t.dzeta2.max_abs() == 0.0);
    CHECK(t.dgradpsi1.max_abs() == 0.0);
    CHECK(t.dgradpsi2.max_abs() == 0.0);

    const SurfaceTangent gen = swsw_rhs(smooth_state(g, 1.0), bottom, p);
    CHECK(std::abs(gen.dzeta1.mean()) <= 1e-14);
    CHECK(std::abs(gen.dzeta2.mean()) <= 1e-14);

    CHECK_THROWS_AS(swsw_rhs(SurfaceState::rest(g), z, linear_params(0.5, 0.5, 0.1).with_eps(0.0, 0.1)),
                    DegenerateAlpha);
}

TEST_CASE("swsw: linearization matches the shallow-water dispersion relation") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    for (double gamma : {0.2, 2.0 / 3.0, 0.95})
        for (double delta : {1.0 / 3.0, 1.0, 3.0}) {
            const PhysicalParams p = linear_params(gamma, delta, 0.1);
            const double k = 2.0;
            const ModeMap map = [&](const Eigen::Vector4d& a) {
                return mode_amplitudes(swsw_rhs(mode_state(g, k, a), ScalarField(g), p), k);
            };
            const Eigen::Matrix4d m = mode_matrix(map, 1.0);
            const Eigen::Vector2d w = mode_frequencies(m);
            const Frequencies s = sw_dispersion(k, p);
            CHECK(w(0) == doctest::Approx(s.minus).epsilon(1e-10));
            CHECK(w(1) == doctest::Approx(s.plus).epsilon(1e-10));
            CHECK(mode_real_part(m) <= 1e-10);
        }
}

TEST_CASE("swsw_step: rest, mass and guards") {
    const GridSpec g = GridSpec::line(64, kTwoPi);
    const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, 0.1, 0.1, 0.1, 0.2);
    const ScalarField bottom = ScalarField::from_function(g, [](double x, double) { return 0.5 * std::cos(x); });
    const SurfaceState rest = SurfaceState::rest(g);
    const SurfaceState same = swsw_step(rest, ScalarField(g), p, 1e-3);
    CHECK(same.zeta1().max_abs() == 0.0);
    CHECK(same.gradpsi2().max_abs() == 0.0);

    SurfaceState s = smooth_state(g, 0.5);
    const Diagnostics d0 = conservation_diagnostics(s, bottom, p);
    Diagnostics prev = d0;
    for (int i = 0; i < 50; ++i) {
        s = swsw_step(s, bottom, p, 1e-3);
        const Diagnostics d = conservation_diagnostics(s, bottom, p);
        CHECK(std::abs(d.mass1 - prev.mass1) <= 1e-12);
        CHECK(std::abs(d.mass2 - prev.mass2) <= 1e-12);
        prev = d;
    }

    CHECK_THROWS_AS(swsw_step(rest, ScalarField(g), p, 10.0), CflViolation);
    // Velocities far above the thickness floor break symmetrizability.
    const ScalarField psi = ScalarField::from_function(g, [](double x, double) { return 200.0 * std::sin(x); });
    const SurfaceState fast = SurfaceState::from_potentials(ScalarField(g), ScalarField(g), psi, ScalarField(g));
    CHECK_THROWS_AS(swsw_step(fast, ScalarField(g), p, 1e-3), HyperbolicityLoss);
}

TEST_CASE("conservation diagnostics: rest values and bottom momentum source") {
    const double lx = kTwoPi, gamma = 2.0 / 3.0, delta = 1.0 / 3.0;
    const GridSpec g = GridSpec::line(64, lx);
    const PhysicalParams p(gamma, delta, 0.1, 0.1, 0.1, 0.3);
    const Diagnostics d = conservation_diagnostics(SurfaceState::rest(g), ScalarField(g), p);
    CHECK(d.mass1 == doctest::Approx(lx));
    CHECK(d.mass2 == doctest::Approx(lx / delta));
    CHECK(d.momentum.at(0) == doctest::Approx(0.0));
    CHECK(d.energy == doctest::Approx(lx * (0.5 * gamma + 0.5 / (delta * delta) + gamma / delta)));

    // d/dt momentum = -integral (gamma h1 + h2) beta grad b.
    const ScalarField bottom = ScalarField::from_function(g, [](double x, double) { return std::cos(x); });
    const double dt = 1e-3;
    SurfaceState s = smooth_state(g, 0.5);
    auto source = [&](const SurfaceState& x) {
        auto [h1, h2] = thicknesses(x, p, bottom);
        return -((gamma * h1 + h2) * (p.beta() * grad(bottom)[0])).integral();
    };
    const double m0 = conservation_diagnostics(s, bottom, p).momentum[0];
    double integral = 0.0, prev = source(s);
    for (int i = 0; i < 100; ++i) {
        s = swsw_step(s, bottom, p, dt);
        const double cur = source(s);
        integral += 0.5 * dt * (prev + cur);
        prev = cur;
    }
    const double m1 = conservation_diagnostics(s, bottom, p).momentum[0];
    CHECK(std::abs(integral) > 1e-4);
    CHECK(std::abs((m1 - m0) - integral) <= 1e-6 * std::abs(integral) + 1e-9);
}

// ---------------------------------------------------------------------------
// Symmetrizer.

TEST_CASE("symmetrizer: rest state, witness and strict boundary") {
    const double gamma = 2.0 / 3.0, delta = 1.0 / 3.0;
    const PhysicalParams p(gamma, delta, 0.1, 0.1, 0.1, 0.0);
    CHECK(std::holds_alternative<PositiveDefinite>(symmetrizer_check(single_node(1.0, 1.0 / delta, {0, 0}, {0, 0}), p)));

    const SymmetrizerVerdict fast = symmetrizer_check(single_node(1.0, 3.0, {1.1, 0.0}, {0, 0}), p);
    REQUIRE(std::holds_alternative<Indefinite>(fast));
    CHECK(std::get<Indefinite>(fast).index < 64u);

    // (h1 - |u1|^2)(h2 - |u2|^2) = gamma h1 h2 exactly, with the box conditions held.
    const double h1 = 1.0, h2 = 1.0, u2sq = 0.25;
    const double u1sq = h1 - gamma * h1 * h2 / (h2 - u2sq);
    QuasilinearState edge = single_node(h1, h2, {std::sqrt(u1sq), 0.0}, {std::sqrt(u2sq), 0.0});
    edge.floor = 0.9;
    CHECK(std::holds_alternative<Indefinite>(symmetrizer_check(edge, p)));
}

TEST_CASE("symmetrizer: sampled states on both sides of the assumptions") {
    const double gamma = 0.8;
    const PhysicalParams p(gamma, 0.5, 0.1, 0.1, 0.1, 0.0);
    for (const auto& q : sample_quasilinear_states(200, std::nullopt, gamma, 1)) {
        const SymmetrizerVerdict v = symmetrizer_check(q, p);
        REQUIRE(std::holds_alternative<PositiveDefinite>(v));
        CHECK(std::get<PositiveDefinite>(v).max_asymmetry <= 1e-12);
    }
    for (SymmetrizerCondition c : {SymmetrizerCondition::H1AboveFloor, SymmetrizerCondition::H2AboveFloor,
                                   SymmetrizerCondition::U1BelowFloor, SymmetrizerCondition::U2BelowFloor,
                                   SymmetrizerCondition::Product}) {
        for (const auto& q : sample_quasilinear_states(100, c, gamma, 2)) {
            const SymmetrizerVerdict v = symmetrizer_check(q, p);
            REQUIRE(std::holds_alternative<Indefinite>(v));
            CHECK(!std::get<Indefinite>(v).reason.empty());
        }
    }
}

TEST_CASE("symmetrizer: S and S A are symmetric; S is positive exactly under the product condition") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uh(0.2, 3.0), uu(-1.0, 1.0), ux(-1.0, 1.0);
    const double gamma = 0.7;
    int positive = 0, rejected = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const double h1 = uh(rng), h2 = uh(rng);
        const std::array<double, 2> u1{uu(rng), uu(rng)}, u2{uu(rng), uu(rng)};
        const Matrix6 s = symmetrizer_matrix(h1, h2, u1, u2, gamma);
        CHECK(max_asymmetry(s) == 0.0);
        const std::array<double, 2> xi{ux(rng), ux(rng)};
        const Matrix6 sa = product(s, flux_matrix(h1, h2, u1, u2, gamma, xi));
        double scale = 0.0;
        for (double v : sa) scale = std::max(scale, std::abs(v));
        CHECK(max_asymmetry(sa) <= 1e-12 * std::max(scale, 1.0));

        const double n1 = u1[0] * u1[0] + u1[1] * u1[1], n2 = u2[0] * u2[0] + u2[1] * u2[1];
        const double floor = std::min(h1, h2);
        if (n1 < floor && n2 < floor) {
            Eigen::Matrix<double, 6, 6> e;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) e(i, j) = s[i * 6 + j];
            const bool pd = e.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() > 0.0;
            const bool product_ok = (h1 - n1) * (h2 - n2) > gamma * h1 * h2;
            CHECK(pd == product_ok);
            (pd ? positive : rejected)++;
        }
    }
    CHECK(positive > 10);
    CHECK(rejected > 10);
}

// ---------------------------------------------------------------------------
// Boussinesq family.

TEST_CASE("boussinesq: rest, velocity variables and time operator") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, 0.1, 0.1, 0.1, 0.0);
    const BoussinesqCoefficients c{0.4714, -0.3942, -1.0};
    const SurfaceState rest = SurfaceState::rest(g);
    CHECK(tangent_max(boussinesq_rhs(rest, ScalarField(g), p, c)) == 0.0);
    const SurfaceState next = boussinesq_step(rest, ScalarField(g), p, c, 1e-3);
    CHECK(next.zeta1().max_abs() == 0.0);

    const SurfaceState s = smooth_state(g, 1.0);
    auto [v1, v2] = boussinesq_velocities(s.gradpsi1(), s.gradpsi2(), p, BoussinesqCoefficients::original());
    CHECK((v1 - s.gradpsi1()).max_abs() == 0.0);
    CHECK((v2 - s.gradpsi2()).max_abs() == 0.0);

    // u1 = q1 - mu b1 lap q1 - mu (a1/delta) lap q2 on a single mode.
    const double k = 2.0;
    const ScalarField m = ScalarField::from_function(g, [=](double x, double) { return std::sin(k * x); });
    const VectorField q(std::vector<ScalarField>{m});
    auto [w1, w2] = boussinesq_velocities(q, 0.5 * q, p, c);
    const double y = p.mu() * k * k;
    CHECK((w1[0] - (1.0 + c.b1 * y + 0.5 * c.a1 / p.delta() * y) * m).max_abs() <= 1e-12);
    CHECK((w2[0] - 0.5 * (1.0 + c.a2 / (p.delta() * p.delta()) * y) * m).max_abs() <= 1e-12);

    auto [m1, m2] = boussinesq_time_operator(s.gradpsi1(), s.gradpsi2(), p, c);
    auto [r1, r2] = boussinesq_solve_time_operator(m1, m2, p, c);
    CHECK((r1 - s.gradpsi1()).max_abs() <= 1e-12);
    CHECK((r2 - s.gradpsi2()).max_abs() <= 1e-12);

    // 1 + mu b1 (-k^2) vanishes at k = 1 and the coupling is off.
    const BoussinesqCoefficients singular{0.0, 0.0, 10.0};
    CHECK_THROWS_AS(boussinesq_solve_time_operator(m1, m2, p, singular), SingularTimeOperator);
    CHECK_THROWS_AS(boussinesq_rhs(rest, ScalarField(g, 0.0) + ScalarField::from_function(g, [](double x, double) {
                                       return std::cos(x);
                                   }),
                                   p.with_beta(0.2), c),
                    Unsupported);
}

TEST_CASE("boussinesq: linearization matches the family dispersion relation") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p = linear_params(2.0 / 3.0, 1.0 / 3.0, 0.1);
    for (const BoussinesqCoefficients& c :
         {BoussinesqCoefficients{0.4714, -0.3942, -1.0}, BoussinesqCoefficients::layer_mean()}) {
        for (double k : {1.0, 4.0, 9.0}) {
            const ModeMap map = [&](const Eigen::Vector4d& a) {
                return mode_amplitudes(boussinesq_rhs(mode_state(g, k, a), ScalarField(g), p, c), k);
            };
            const BoussinesqRoots r = boussinesq_dispersion(k, p, c);
            REQUIRE(std::holds_alternative<Frequencies>(r));
            const Eigen::Vector2d w = mode_frequencies(mode_matrix(map, 1.0));
            CHECK(w(0) == doctest::Approx(std::get<Frequencies>(r).minus).epsilon(1e-9));
            CHECK(w(1) == doctest::Approx(std::get<Frequencies>(r).plus).epsilon(1e-9));
        }
    }
}

TEST_CASE("boussinesq: original coefficients approach shallow water as mu decreases") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const SurfaceState s = smooth_state(g, 1.0);
    auto gap = [&](double mu) {
        const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, mu, mu, mu, 0.0);
        const SurfaceTangent a = boussinesq_rhs(s, ScalarField(g), p, BoussinesqCoefficients::original());
        SurfaceTangent b = swsw_rhs(s, ScalarField(g), p);
        b.axpy(-1.0, a);
        return b.max_abs();
    };
    const double ratio = gap(1e-2) / gap(1e-3);
    CHECK(ratio == doctest::Approx(10.0).epsilon(0.2));
}

// ---------------------------------------------------------------------------
// Higher-order system.

TEST_CASE("higher order: rest state and flat reductions") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.3);
    const ScalarField bottom = ScalarField::from_function(g, [](double x, double) { return std::cos(x); });
    const HigherOrderTerms rest = ho_rhs(SurfaceState::rest(g), bottom, p);
    CHECK(rest.spatial.max_abs() == 0.0);
    CHECK(rest.coupling(SurfaceTangent::zero(g)).max_abs() == 0.0);

    const ScalarField z(g);
    const ScalarField psi = ScalarField::from_function(g, [](double x, double) { return std::cos(2.0 * x); });
    const SurfaceState upper = SurfaceState::from_potentials(z, z, psi, z);
    CHECK((ho_hcal(upper, z, p) - 0.5 * laplacian(psi)).max_abs() <= 1e-12);

    const SurfaceState s = SurfaceState::from_potentials(z, ScalarField::from_function(g, [](double x, double) {
                                                             return 0.3 * std::cos(x + 0.5);
                                                         }),
                                                         psi, 0.5 * psi);
    auto [h1, h2] = thicknesses(s, p, bottom);
    const ScalarField sum = div(h1 * s.gradpsi1()) + div(h2 * s.gradpsi2());
    CHECK((ho_nonlinear(s, bottom, p).first - 0.5 * sum * sum).max_abs() <= 1e-11);
}

// ---------------------------------------------------------------------------
// Rigid lid.

TEST_CASE("rigid lid Q: one-dimensional closed form") {
    const GridSpec g = GridSpec::line(128, kTwoPi);
    const ScalarField zeta = ScalarField::from_function(g, [](double x, double) { return 0.4 * std::cos(x) + 0.2 * std::sin(3.0 * x); });
    const VectorField w(std::vector<ScalarField>{
        ScalarField::from_function(g, [](double x, double) { return std::sin(2.0 * x) + 0.3 * std::cos(x); })});
    const VectorField v = rigid_lid_solve_q(zeta, w);
    const ScalarField a = 1.0 + zeta;
    const double c = -(w[0] / a).mean() / (ScalarField(g, 1.0) / a).mean();
    const ScalarField expected = (w[0] + c) / a;
    // The discrete solution has no Nyquist content; the grid resolves the closed form's tail.
    CHECK((v[0] - expected).max_abs() <= 1e-12);
    CHECK(std::abs(v[0].mean()) <= 1e-13);
}

TEST_CASE("rigid lid Q: two-dimensional contract") {
    const GridSpec g = GridSpec::plane(32, 32, kTwoPi, kTwoPi);
    const VectorField w(std::vector<ScalarField>{
        ScalarField::from_function(g, [](double x, double y) { return std::sin(x) * std::cos(y) + 0.2; }),
        ScalarField::from_function(g, [](double x, double y) { return std::cos(2.0 * x + y); })});
    const VectorField v0 = rigid_lid_solve_q(ScalarField(g), w);
    CHECK((v0 - gradient_projection(w)).max_abs() <= 1e-10);

    const ScalarField zeta = ScalarField::from_function(g, [](double x, double y) { return 0.3 * std::cos(x) * std::sin(y); });
    const VectorField v = rigid_lid_solve_q(zeta, w);
    const double rhs = div(w).l2_norm();
    CHECK((div((1.0 + zeta) * v) - div(w)).l2_norm() <= 1e-10 * rhs);
    CHECK(curl(v).l2_norm() <= 1e-10 * v.l2_norm());

    const ScalarField s = ScalarField::from_function(g, [](double x, double y) { return std::sin(x + y); });
    const VectorField solenoidal(std::vector<ScalarField>{derivative(s, 1), -derivative(s, 0)});
    CHECK(rigid_lid_solve_q(zeta, solenoidal).max_abs() <= 1e-12);
    CHECK_THROWS_AS(rigid_lid_solve_q(ScalarField(g, -1.0), w), CoefficientDegenerate);
}

TEST_CASE("rigid lid system: rest, linearization and restrictions") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const double gamma = 2.0 / 3.0, delta = 1.0 / 3.0;
    const PhysicalParams p(gamma, delta, 0.1, 0.0, 0.1, 0.0);
    const RigidLidTangent r = rigid_lid_rhs(ScalarField(g), VectorField(g), ScalarField(g), p);
    CHECK(r.dzeta2.max_abs() == 0.0);
    CHECK(r.dv.max_abs() == 0.0);

    const VectorField v(std::vector<ScalarField>{
        ScalarField::from_function(g, [](double x, double) { return 1e-6 * std::sin(2.0 * x); })});
    const RigidLidTangent t = rigid_lid_rhs(ScalarField(g), v, ScalarField(g), p);
    const ScalarField expected = -(delta / (gamma + delta)) * div((1.0 / delta) * v);
    CHECK((t.dzeta2 - expected).max_abs() <= 1e-12 * 1e-6 + 1e-20);

    const ScalarField bottom = ScalarField::from_function(g, [](double x, double) { return std::cos(x); });
    CHECK_THROWS_AS(rigid_lid_rhs(ScalarField(g), v, bottom, p.with_beta(0.1)), Unsupported);
    CHECK_THROWS_AS(rigid_lid_rhs(ScalarField(g), v, ScalarField(g), PhysicalParams(gamma, delta, 0.1, 0.1, 0.1, 0.0)),
                    InvalidParameter);
    CHECK(rigid_lid_cfl_limit(g, p) > 0.0);
    const RigidLidState still = rigid_lid_step({ScalarField(g), VectorField(g)}, ScalarField(g), p, 1e-3);
    CHECK(still.zeta2.max_abs() == 0.0);
}

// ---------------------------------------------------------------------------
// Layer-mean systems.

TEST_CASE("layer mean: rest, mass conservation and the higher-order restriction") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const PhysicalParams p(0.8, 0.5, 0.1, 0.3, 0.3, 0.0);
    const SurfaceState rest = SurfaceState::rest(g);
    const LayerMeanState lr = layer_mean_state(rest, ScalarField(g), p, VectorField(g), VectorField(g));
    for (LayerMeanVariant v : {LayerMeanVariant::SwswLm, LayerMeanVariant::BoussLm})
        CHECK(layer_mean_rhs(v, lr, ScalarField(g), p).max_abs() == 0.0);
    CHECK_THROWS_AS(layer_mean_rhs(LayerMeanVariant::HoLm, lr, ScalarField(g), p), Unsupported);
    const LayerMeanHigherOrderTerms ho = ho_layer_mean_terms(lr, ScalarField(g), p);
    CHECK(ho.spatial.max_abs() == 0.0);

    const SurfaceState s = smooth_state(g, 0.5);
    LayerMeanState lm = layer_mean_state(s, ScalarField(g), p, s.gradpsi1(), s.gradpsi2());
    const Diagnostics d0 = conservation_diagnostics(lm, p);
    for (LayerMeanVariant v : {LayerMeanVariant::SwswLm, LayerMeanVariant::BoussLm}) {
        const LayerMeanTangent t = layer_mean_rhs(v, lm, ScalarField(g), p);
        CHECK(std::abs(t.dh1.mean()) <= 1e-14);
        CHECK(std::abs(t.dh2.mean()) <= 1e-14);
    }
    for (int i = 0; i < 20; ++i) lm = layer_mean_step(LayerMeanVariant::SwswLm, lm, ScalarField(g), p, 1e-3);
    const Diagnostics d1 = conservation_diagnostics(lm, p);
    CHECK(std::abs(d1.mass1 - d0.mass1) <= 1e-11);
    CHECK(std::abs(d1.mass2 - d0.mass2) <= 1e-11);
}

TEST_CASE("layer mean: linearizations match the shallow-water and layer-mean Boussinesq relations") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const double eps = 1e-9;
    const PhysicalParams p(2.0 / 3.0, 1.0 / 3.0, 0.1, eps, eps, 0.0);
    for (LayerMeanVariant variant : {LayerMeanVariant::SwswLm, LayerMeanVariant::BoussLm}) {
        for (double k : {1.0, 3.0}) {
            const ModeMap map = [&](const Eigen::Vector4d& a) {
                const SurfaceState s = mode_state(g, k, a);
                const LayerMeanState lm = layer_mean_state(s, ScalarField(g), p, s.gradpsi1(), s.gradpsi2());
                const LayerMeanTangent t = layer_mean_rhs(variant, lm, ScalarField(g), p);
                // dh1 = eps (alpha dzeta1 - dzeta2) and dh2 = eps dzeta2 with alpha = 1.
                const ScalarField dz2 = (1.0 / eps) * t.dh2;
                const ScalarField dz1 = (1.0 / eps) * t.dh1 + dz2;
                return Eigen::Vector4d(cos_coefficient(dz1, k), cos_coefficient(dz2, k),
                                       sin_coefficient(t.du1[0], k), sin_coefficient(t.du2[0], k));
            };
            const Eigen::Vector2d w = mode_frequencies(mode_matrix(map, 1.0));
            Frequencies expected;
            if (variant == LayerMeanVariant::SwswLm) {
                expected = sw_dispersion(k, p);
            } else {
                const BoussinesqRoots r = boussinesq_dispersion(k, p, BoussinesqCoefficients::layer_mean());
                REQUIRE(std::holds_alternative<Frequencies>(r));
                expected = std::get<Frequencies>(r);
            }
            CHECK(w(0) == doctest::Approx(expected.minus).epsilon(1e-6));
            CHECK(w(1) == doctest::Approx(expected.plus).epsilon(1e-6));
        }
    }
}
