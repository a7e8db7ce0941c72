#include <algorithm>
#include <limits>

#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"
#include "terms.hpp"

namespace stratwave {

namespace {

constexpr double kNoFloor = std::numeric_limits<double>::lowest();

ScalarField hcal_of(const ScalarField& z1, const ScalarField& z2, const ScalarField& b,
                    const VectorField& q1, const VectorField& q2, const PhysicalParams& p) {
    const auto s = detail::shapes(z1, z2, b, p, kNoFloor);
    const auto t = detail::terms(s, q1, q2, false);
    return detail::h_bracket(s, t, q1, false);
}

// Step for the directional derivative of a cubic functional: large enough to
// keep rounding small, small enough to stay near the state.
double polynomial_step(const SurfaceState& s, const SurfaceTangent& t) {
    const double scale = std::max({1.0, s.zeta1().max_abs(), s.zeta2().max_abs(),
                                   s.gradpsi1().max_abs(), s.gradpsi2().max_abs()});
    const double rate = t.max_abs();
    return rate > 0.0 ? 0.1 * scale / rate : 1.0;
}

}  // namespace

ScalarField ho_hcal(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p) {
    require_same_grid(s.grid(), b.grid(), "ho_hcal");
    const auto sh = detail::shapes(s.zeta1(), s.zeta2(), b, p, s.h_min());
    const auto t = detail::terms(sh, s.gradpsi1(), s.gradpsi2(), false);
    return detail::h_bracket(sh, t, s.gradpsi1(), false);
}

std::pair<ScalarField, ScalarField> ho_nonlinear(const SurfaceState& s, const ScalarField& b,
                                                 const PhysicalParams& p) {
    require_same_grid(s.grid(), b.grid(), "ho_nonlinear");
    const auto sh = detail::shapes(s.zeta1(), s.zeta2(), b, p, s.h_min());
    const auto t = detail::terms(sh, s.gradpsi1(), s.gradpsi2(), false);
    return detail::nonlinear(sh, t, s.gradpsi1(), s.gradpsi2(), p.gamma());
}

HigherOrderTerms ho_rhs(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p) {
    require_same_grid(s.grid(), b.grid(), "ho_rhs");
    if (!(p.alpha() > 0.0)) throw DegenerateAlpha("alpha = 0: use the rigid-lid system");
    const auto sh = detail::shapes(s.zeta1(), s.zeta2(), b, p, s.h_min());
    const VectorField& q1 = s.gradpsi1();
    const VectorField& q2 = s.gradpsi2();
    const auto t = detail::terms(sh, q1, q2, false);
    const auto [n1, n2] = detail::nonlinear(sh, t, q1, q2, p.gamma());
    const ScalarField hcal = detail::h_bracket(sh, t, q1, false);

    const double mu = p.mu();
    const double a = p.alpha();
    const double g = p.gamma();
    const double e2 = p.eps2();
    const VectorField gz1 = grad(s.zeta1());
    const VectorField gz2 = grad(s.zeta2());

    HigherOrderTerms out{{1.0 / a * (-(t.a1 + t.a2) + mu * detail::g1_second(sh, t, false)),
                          -t.a2 + mu * div(t.t2), VectorField(s.grid()), VectorField(s.grid())},
                         {}};
    out.spatial.dgradpsi1 = -a * gz1 - 0.5 * e2 * grad(norm_squared(q1)) + mu * e2 * grad(n1);
    out.spatial.dgradpsi2 = -(1.0 - g) * gz2 - g * a * gz1 - 0.5 * e2 * grad(norm_squared(q2)) +
                            mu * e2 * grad(g * dot(q1, grad(hcal)) + n2 + g * n1);

    // Hcal is cubic in the state, so the four-point stencil is exact.
    out.coupling = [s, b, p](const SurfaceTangent& tan) {
        const double tau = polynomial_step(s, tan);
        const ScalarField dh = detail::four_point_derivative(
            [&](double e) {
                ScalarField z1 = s.zeta1();
                ScalarField z2 = s.zeta2();
                VectorField q1 = s.gradpsi1();
                VectorField q2 = s.gradpsi2();
                z1.axpy(e, tan.dzeta1);
                z2.axpy(e, tan.dzeta2);
                q1.axpy(e, tan.dgradpsi1);
                q2.axpy(e, tan.dgradpsi2);
                return hcal_of(z1, z2, b, q1, q2, p);
            },
            tau);
        return p.mu() * p.gamma() * grad(dh);
    };
    return out;
}

}  // namespace stratwave
