#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "integrators.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"
#include "terms.hpp"

namespace stratwave {

namespace {

void require_flat_bottom(const ScalarField& b, const PhysicalParams& p, const char* what) {
    if (p.beta() != 0.0 && b.max_abs() != 0.0)
        throw Unsupported(std::string(what) + " requires a flat bottom (beta b = 0)");
}

VectorField vector_laplacian(const VectorField& v) {
    std::vector<ScalarField> c;
    for (int a = 0; a < v.dim(); ++a) c.push_back(laplacian(v[a]));
    return VectorField(std::move(c));
}

// mu |k|^2 as seen by the spectral Laplacian (Nyquist components dropped).
double symbol_y(const Spectrum& s, std::size_t i, double mu) {
    const Wavevector k = s.wavevector(i);
    const double kx = s.nyquist_x(i) ? 0.0 : k.kx;
    const double ky = s.nyquist_y(i) ? 0.0 : k.ky;
    return mu * (kx * kx + ky * ky);
}

struct Symbol {
    double m11, m12, m21, m22;
};

Symbol time_symbol(double y, const PhysicalParams& p, const BoussinesqCoefficients& c) {
    const double d = p.delta();
    const double g = p.gamma();
    return {1.0 - c.b1 * y, -(c.a1 / d) * y, 0.5 * g * y, 1.0 - (c.a2 / (d * d) - g / d) * y};
}

}  // namespace

std::pair<VectorField, VectorField> boussinesq_velocities(const VectorField& q1, const VectorField& q2,
                                                          const PhysicalParams& p,
                                                          const BoussinesqCoefficients& c) {
    const double mu = p.mu();
    const double d = p.delta();
    const VectorField l1 = vector_laplacian(q1);
    const VectorField l2 = vector_laplacian(q2);
    return {q1 - mu * c.b1 * l1 - mu * (c.a1 / d) * l2, q2 - mu * (c.a2 / (d * d)) * l2};
}

SurfaceTangent boussinesq_forcing(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                                  const BoussinesqCoefficients& c, bool dealias) {
    require_same_grid(s.grid(), b.grid(), "boussinesq_forcing");
    require_flat_bottom(b, p, "the Boussinesq family");
    if (!(p.alpha() > 0.0)) throw DegenerateAlpha("alpha = 0: use the rigid-lid system");
    auto [h1, h2] = thicknesses(s, p, b);
    const VectorField& u1 = s.gradpsi1();
    const VectorField& u2 = s.gradpsi2();
    const double mu = p.mu();
    const double a = p.alpha();
    const double e2 = p.eps2();
    const double d = p.delta();

    const ScalarField m1 = div(detail::mul(h1, u1, dealias));
    const ScalarField m2 = div(detail::mul(h2, u2, dealias));
    const ScalarField d1 = laplacian(div(u1));
    const ScalarField d2 = laplacian(div(u2));
    const VectorField gz1 = grad(s.zeta1());
    const VectorField gz2 = grad(s.zeta2());

    SurfaceTangent t{-1.0 / a * (m1 + m2 + mu * (c.beta1() * d1 + (c.alpha1(d) + c.alpha2(d)) * d2)),
                     -(m2 + mu * c.alpha2(d) * d2), VectorField(s.grid()), VectorField(s.grid())};
    t.dgradpsi1 = -a * gz1 - 0.5 * e2 * grad(detail::dot(u1, u1, dealias));
    t.dgradpsi2 = -(1.0 - p.gamma()) * gz2 - a * p.gamma() * gz1 -
                  0.5 * e2 * grad(detail::dot(u2, u2, dealias));
    return t;
}

std::pair<VectorField, VectorField> boussinesq_time_operator(const VectorField& v1, const VectorField& v2,
                                                             const PhysicalParams& p,
                                                             const BoussinesqCoefficients& c) {
    const double mu = p.mu();
    const double d = p.delta();
    const double g = p.gamma();
    const VectorField l1 = vector_laplacian(v1);
    const VectorField l2 = vector_laplacian(v2);
    return {v1 + mu * c.b1 * l1 + mu * (c.a1 / d) * l2,
            v2 + mu * (c.a2 / (d * d) - g / d) * l2 - mu * 0.5 * g * l1};
}

std::pair<VectorField, VectorField> boussinesq_solve_time_operator(const VectorField& f1,
                                                                   const VectorField& f2,
                                                                   const PhysicalParams& p,
                                                                   const BoussinesqCoefficients& c) {
    require_same_grid(f1.grid(), f2.grid(), "boussinesq_solve_time_operator");
    std::vector<ScalarField> o1, o2;
    for (int a = 0; a < f1.dim(); ++a) {
        const Spectrum s1 = forward(f1[a]);
        const Spectrum s2 = forward(f2[a]);
        Spectrum r1(f1.grid()), r2(f1.grid());
        for (std::size_t i = 0; i < s1.size(); ++i) {
            const Symbol m = time_symbol(symbol_y(s1, i, p.mu()), p, c);
            const double det = m.m11 * m.m22 - m.m12 * m.m21;
            const double scale = std::max({std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
            if (!(std::abs(det) > 1e-12 * scale * scale)) {
                std::ostringstream msg;
                msg << "time operator singular at k=" << s1.wavevector(i).norm();
                throw SingularTimeOperator(msg.str());
            }
            r1[i] = (m.m22 * s1[i] - m.m12 * s2[i]) / det;
            r2[i] = (m.m11 * s2[i] - m.m21 * s1[i]) / det;
        }
        o1.push_back(inverse(r1));
        o2.push_back(inverse(r2));
    }
    return {VectorField(std::move(o1)), VectorField(std::move(o2))};
}

namespace {

SurfaceTangent closed_rhs(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                          const BoussinesqCoefficients& c, bool dealias) {
    SurfaceTangent t = boussinesq_forcing(s, b, p, c, dealias);
    auto [d1, d2] = boussinesq_solve_time_operator(t.dgradpsi1, t.dgradpsi2, p, c);
    t.dgradpsi1 = std::move(d1);
    t.dgradpsi2 = std::move(d2);
    return t;
}

}  // namespace

SurfaceTangent boussinesq_rhs(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                              const BoussinesqCoefficients& c) {
    return closed_rhs(s, b, p, c, false);
}

SurfaceState boussinesq_step(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                             const BoussinesqCoefficients& c, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    const double limit = cfl_limit(s.grid(), p);
    if (dt > limit) {
        std::ostringstream msg;
        msg << "dt=" << dt << " exceeds the CFL limit " << limit;
        throw CflViolation(msg.str());
    }
    return detail::rk4(
        s, dt, [&](const SurfaceState& x) { return closed_rhs(x, b, p, c, true); },
        [](const SurfaceState& x, double a, const SurfaceTangent& t) { return advance(x, a, t); });
}

}  // namespace stratwave
