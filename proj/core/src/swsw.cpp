#include <cmath>
#include <limits>
#include <sstream>

#include "integrators.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"
#include "terms.hpp"

namespace stratwave {

namespace {

SurfaceTangent swsw_tangent(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                            bool dealias) {
    if (!(p.alpha() > 0.0))
        throw DegenerateAlpha("alpha = 0: the free-surface system is singular; use the rigid-lid system");
    require_same_grid(s.grid(), b.grid(), "swsw_rhs");
    auto [h1, h2] = thicknesses(s, p, b);
    const VectorField& q1 = s.gradpsi1();
    const VectorField& q2 = s.gradpsi2();
    const double a = p.alpha();
    const double e2 = p.eps2();

    const ScalarField a1 = div(detail::mul(h1, q1, dealias));
    const ScalarField a2 = div(detail::mul(h2, q2, dealias));
    const VectorField gz1 = grad(s.zeta1());
    const VectorField gz2 = grad(s.zeta2());

    SurfaceTangent t{-1.0 / a * (a1 + a2), -a2, VectorField(s.grid()), VectorField(s.grid())};
    t.dgradpsi1 = -a * gz1 - 0.5 * e2 * grad(detail::dot(q1, q1, dealias));
    t.dgradpsi2 = -(1.0 - p.gamma()) * gz2 - p.gamma() * a * gz1 -
                  0.5 * e2 * grad(detail::dot(q2, q2, dealias));
    return t;
}

}  // namespace

SurfaceTangent swsw_rhs(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p) {
    return swsw_tangent(s, b, p, false);
}

double cfl_limit(const GridSpec& grid, const PhysicalParams& p) {
    double dx = grid.dx();
    if (grid.dim == 2) dx = std::min(dx, grid.dy());
    return 0.5 * dx / sw_dispersion(1.0, p).plus;
}

SurfaceState swsw_step(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    const double limit = cfl_limit(s.grid(), p);
    if (dt > limit) {
        std::ostringstream msg;
        msg << "dt=" << dt << " exceeds the CFL limit " << limit;
        throw CflViolation(msg.str());
    }
    const SymmetrizerVerdict v = symmetrizer_check(QuasilinearState::from_surface(s, b, p), p);
    if (const auto* bad = std::get_if<Indefinite>(&v))
        throw HyperbolicityLoss("symmetrizability lost at node " + std::to_string(bad->index) + ": " +
                                bad->reason);
    return detail::rk4(
        s, dt, [&](const SurfaceState& x) { return swsw_tangent(x, b, p, true); },
        [](const SurfaceState& x, double a, const SurfaceTangent& t) { return advance(x, a, t); });
}

namespace {

Diagnostics diagnostics_of(const ScalarField& h1, const ScalarField& h2, const VectorField& u1,
                           const VectorField& u2, double g) {
    Diagnostics d;
    d.mass1 = h1.integral();
    d.mass2 = h2.integral();
    for (int a = 0; a < u1.dim(); ++a) d.momentum.push_back((g * h1 * u1[a] + h2 * u2[a]).integral());
    const ScalarField kinetic = 0.5 * (g * h1 * norm_squared(u1) + h2 * norm_squared(u2));
    const ScalarField pressure = 0.5 * g * h1 * h1 + 0.5 * h2 * h2 + g * h1 * h2;
    d.energy = (kinetic + pressure).integral();
    return d;
}

}  // namespace

Diagnostics conservation_diagnostics(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p) {
    auto [h1, h2] = thicknesses(s.zeta1(), s.zeta2(), b, p, std::numeric_limits<double>::lowest());
    return diagnostics_of(h1, h2, p.eps2() * s.gradpsi1(), p.eps2() * s.gradpsi2(), p.gamma());
}

Diagnostics conservation_diagnostics(const LayerMeanState& s, const PhysicalParams& p) {
    return diagnostics_of(s.h1, s.h2, p.eps2() * s.u1, p.eps2() * s.u2, p.gamma());
}

}  // namespace stratwave
