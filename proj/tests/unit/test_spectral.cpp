#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stratwave/errors.hpp"
#include "stratwave/spectral.hpp"

using namespace stratwave;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Random band-limited field with modes |j| <= jmax.
ScalarField random_field(const GridSpec& g, std::mt19937_64& rng, int jmax) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<std::array<double, 4>> c;
    for (int j = 0; j <= jmax; ++j)
        for (int l = 0; l <= (g.dim == 2 ? jmax : 0); ++l) c.push_back({n(rng), n(rng), double(j), double(l)});
    const double kx = kTwoPi / g.lx, ky = g.dim == 2 ? kTwoPi / g.ly : 0.0;
    return ScalarField::from_function(g, [&](double x, double y) {
        double s = 0.0;
        for (const auto& m : c) {
            const double ph = m[2] * kx * x + m[3] * ky * y;
            s += m[0] * std::cos(ph) + m[1] * std::sin(ph);
        }
        return s;
    });
}

}  // namespace

TEST_CASE("spectrum: unit cosine normalization") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const Spectrum s = forward(ScalarField::from_function(g, [](double x, double) { return std::cos(3.0 * x); }));
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double expected = s.jx(i) == 3 ? 0.5 : 0.0;
        CHECK(std::abs(s[i] - std::complex<double>(expected, 0.0)) <= 1e-14);
    }
}

TEST_CASE("apply_multiplier: identity and single-mode eigenfunctions") {
    const GridSpec g = GridSpec::line(64, kTwoPi);
    const int k = 5;
    const ScalarField f = ScalarField::from_function(g, [&](double x, double) { return std::cos(k * x); });

    CHECK((apply_multiplier(f, [](const Wavevector&) { return 1.0; }) - f).max_abs() <= 1e-14);

    const ScalarField absd = apply_multiplier(f, [](const Wavevector& w) { return w.norm(); });
    CHECK((absd - k * f).max_abs() <= 1e-12);

    const ScalarField th = apply_multiplier(f, [](const Wavevector& w) { return std::tanh(w.kx); });
    CHECK((th - std::tanh(double(k)) * f).max_abs() <= 1e-13);

    CHECK_THROWS_AS(apply_multiplier(f, [](const Wavevector& w) { return 1.0 / w.norm(); }),
                    NonFiniteMultiplier);
    CHECK_THROWS_AS(apply_multiplier(f, [](const Wavevector&) { return NAN; }), NonFiniteMultiplier);
}

TEST_CASE("derivatives: single modes") {
    const GridSpec g = GridSpec::line(32, 4.0);  // k = 2 pi j / 4
    const double k = kTwoPi * 3.0 / 4.0;
    const ScalarField f = ScalarField::from_function(g, [&](double x, double) { return std::sin(k * x); });
    const VectorField gf = grad(f);
    const ScalarField expected = ScalarField::from_function(g, [&](double x, double) { return k * std::cos(k * x); });
    CHECK((gf[0] - expected).max_abs() <= 1e-12);
    CHECK((div(gf) + k * k * f).max_abs() <= 1e-11);
    CHECK((laplacian(f) + k * k * f).max_abs() <= 1e-11);

    CHECK(grad(ScalarField(g, 4.2))[0].max_abs() <= 1e-14);
    CHECK(curl(gf).max_abs() == 0.0);
}

TEST_CASE("derivatives: 2D gradient is curl-free and div grad equals laplacian") {
    const GridSpec g = GridSpec::plane(32, 16, kTwoPi, 3.0);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const ScalarField f = random_field(g, rng, 5);
        const VectorField gf = grad(f);
        const double scale = f.l2_norm();
        CHECK((div(gf) - laplacian(f)).l2_norm() <= 1e-12 * scale * 100.0);
        CHECK(curl(gf).l2_norm() <= 1e-12 * scale * 10.0);
    }
}

TEST_CASE("parseval and round trip") {
    std::mt19937_64 rng(3);
    for (const GridSpec& g : {GridSpec::line(64, kTwoPi), GridSpec::plane(16, 32, 1.0, 2.0)}) {
        for (int trial = 0; trial < 5; ++trial) {
            const ScalarField f = random_field(g, rng, 6);
            const ScalarField back = inverse(forward(f));
            CHECK((back - f).max_abs() <= 1e-13 * f.max_abs() * 10.0);
            // s = 0 Sobolev norm is the spectral L2 norm.
            CHECK(std::abs(sobolev_norm(f, 0.0) - f.l2_norm()) <= 1e-13 * f.l2_norm() * 10.0);
        }
    }
}

TEST_CASE("sobolev norm: single mode weight") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    const ScalarField f = ScalarField::from_function(g, [](double x, double) { return std::cos(4.0 * x); });
    // |T| sum over +-k of (1 + 16)^2 / 4 = 2 pi (17^2) / 2.
    CHECK(sobolev_norm(f, 2.0) == doctest::Approx(std::sqrt(kTwoPi * 289.0 / 2.0)).epsilon(1e-13));
    CHECK(sobolev_norm(ScalarField(g, 1.0), 2.0) == doctest::Approx(std::sqrt(kTwoPi)));
}

TEST_CASE("dealias: two-thirds rule") {
    const GridSpec g = GridSpec::line(64, kTwoPi);
    const ScalarField low = ScalarField::from_function(g, [](double x, double) {
        return std::cos(3.0 * x) + 0.5 * std::sin(21.0 * x);
    });
    CHECK((dealias(low) - low).max_abs() <= 1e-14);

    const ScalarField high = ScalarField::from_function(g, [](double x, double) { return std::cos(31.0 * x); });
    CHECK(dealias(high).max_abs() <= 1e-13);

    // cos(20x)^2 = 1/2 + cos(40x)/2: the j = 40 product mode aliases to j = -24 and is removed.
    const ScalarField m = ScalarField::from_function(g, [](double x, double) { return std::cos(20.0 * x); });
    CHECK((dealias(m * m) - ScalarField(g, 0.5)).max_abs() <= 1e-13);
}

TEST_CASE("potential_from_gradient and gradient projection") {
    const GridSpec g = GridSpec::plane(32, 32, kTwoPi, kTwoPi);
    std::mt19937_64 rng(5);
    ScalarField p = random_field(g, rng, 4);
    p += -p.mean();
    CHECK((potential_from_gradient(grad(p)) - p).max_abs() <= 1e-12 * p.max_abs() * 10.0);

    VectorField shifted = grad(p);
    shifted[0] += 1.0;
    CHECK_THROWS_AS(potential_from_gradient(shifted), InvalidArgument);

    // Divergence-free part is removed.
    const ScalarField s = ScalarField::from_function(g, [](double x, double y) { return std::sin(x + 2.0 * y); });
    VectorField rot(std::vector<ScalarField>{derivative(s, 1), -derivative(s, 0)});
    const VectorField mixed = grad(p) + rot;
    CHECK((gradient_projection(mixed) - grad(p)).max_abs() <= 1e-12);
    CHECK(gradient_projection(rot).max_abs() <= 1e-13);
}

TEST_CASE("translate: equivariance of differentiation") {
    const GridSpec g = GridSpec::line(32, kTwoPi);
    std::mt19937_64 rng(9);
    const ScalarField f = random_field(g, rng, 6);
    const ScalarField a = translate(laplacian(f), 5);
    const ScalarField b = laplacian(translate(f, 5));
    CHECK((a - b).max_abs() <= 1e-11);
    CHECK((translate(translate(f, 5), -5) - f).max_abs() == 0.0);
    CHECK(translate(f, 1)[1] == f[0]);
}
