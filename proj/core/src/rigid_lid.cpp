#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "integrators.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"
#include "terms.hpp"

namespace stratwave {

namespace {

double inner(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// -div(c grad p)
ScalarField apply_elliptic(const ScalarField& c, const ScalarField& p) {
    return -div(c * grad(p));
}

// Inverse of -cbar lap on the range (zero mean, no Nyquist content).
ScalarField precondition(const ScalarField& r, double cbar) {
    Spectrum s = forward(r);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Wavevector k = s.wavevector(i);
        const double kx = s.nyquist_x(i) ? 0.0 : k.kx;
        const double ky = s.nyquist_y(i) ? 0.0 : k.ky;
        const double k2 = kx * kx + ky * ky;
        s[i] = k2 > 0.0 ? s[i] / (cbar * k2) : 0.0;
    }
    return inverse(s);
}

constexpr double kCgTolerance = 1e-13;
constexpr double kContractTolerance = 1e-10;
constexpr int kCgMaxIterations = 1000;

}  // namespace

VectorField rigid_lid_solve_q(const ScalarField& zeta, const VectorField& w) {
    require_same_grid(zeta.grid(), w.grid(), "rigid_lid_solve_q");
    const ScalarField c = 1.0 + zeta;
    if (!(c.min() > 0.0)) {
        std::ostringstream msg;
        msg << "min(1 + zeta) = " << c.min() << " is not positive";
        throw CoefficientDegenerate(msg.str());
    }
    const ScalarField divw = div(w);
    const double norm_b = divw.l2_norm();
    // Divergence at round-off level of |k|max |W|: W has no gradient part.
    const GridSpec& g = zeta.grid();
    const double kmax = std::numbers::pi / (g.dim == 2 ? std::min(g.dx(), g.dy()) : g.dx());
    if (norm_b <= 1e-14 * kmax * w.l2_norm()) return VectorField(g);

    const double cbar = c.mean();
    const ScalarField rhs = -divw;
    ScalarField x(zeta.grid());
    ScalarField r = rhs;
    ScalarField z = precondition(r, cbar);
    ScalarField d = z;
    double rz = inner(r, z);
    int it = 0;
    for (; it < kCgMaxIterations && r.l2_norm() > kCgTolerance * norm_b; ++it) {
        const ScalarField ad = apply_elliptic(c, d);
        const double step = rz / inner(d, ad);
        x.axpy(step, d);
        r.axpy(-step, ad);
        z = precondition(r, cbar);
        const double rz_new = inner(r, z);
        d *= rz_new / rz;
        d += z;
        rz = rz_new;
    }
    VectorField v = grad(x);
    const double res = (div(c * v) - divw).l2_norm();
    if (!(res <= kContractTolerance * norm_b)) {
        std::ostringstream msg;
        msg << "conjugate gradients stalled after " << it << " iterations (relative residual "
            << res / norm_b << ")";
        throw NoConvergence(msg.str());
    }
    return v;
}

RigidLidTangent& RigidLidTangent::axpy(double a, const RigidLidTangent& x) {
    dzeta2.axpy(a, x.dzeta2);
    dv.axpy(a, x.dv);
    return *this;
}

RigidLidState advance(const RigidLidState& s, double a, const RigidLidTangent& t) {
    RigidLidState out = s;
    out.zeta2.axpy(a, t.dzeta2);
    out.v.axpy(a, t.dv);
    return out;
}

ScalarField rigid_lid_coefficient(const ScalarField& zeta2, const PhysicalParams& p) {
    const double g = p.gamma();
    const double d = p.delta();
    return (g - 1.0) / (g + d) * d * p.eps2() * zeta2;
}

namespace {

RigidLidTangent rigid_lid_tangent(const ScalarField& zeta2, const VectorField& v, const ScalarField& b,
                                  const PhysicalParams& p, bool dealias) {
    require_same_grid(zeta2.grid(), v.grid(), "rigid_lid_rhs");
    require_same_grid(zeta2.grid(), b.grid(), "rigid_lid_rhs");
    if (p.beta() != 0.0 && b.max_abs() != 0.0)
        throw Unsupported("the rigid-lid system requires a flat bottom (beta b = 0)");
    if (p.eps1() != 0.0) throw InvalidParameter("the rigid-lid system requires eps1 = 0");
    const double g = p.gamma();
    const double d = p.delta();
    const double e2 = p.eps2();
    const ScalarField h1 = 1.0 - e2 * zeta2;
    const ScalarField h2 = 1.0 / d + e2 * zeta2;
    if (!(h1.min() > 0.0) || !(h2.min() > 0.0))
        throw ConnectednessViolation("nonpositive layer thickness in the rigid-lid system");

    const VectorField q = rigid_lid_solve_q(rigid_lid_coefficient(zeta2, p), detail::mul(h2, v, dealias));
    const VectorField w = v - g * d / (g + d) * q;
    const double cq = g * d * d / ((g + d) * (g + d));
    RigidLidTangent t{-d / (g + d) * div(detail::mul(h1, q, dealias)), VectorField(zeta2.grid())};
    t.dv = -(1.0 - g) * grad(zeta2) -
           0.5 * e2 * grad(detail::dot(w, w, dealias) - cq * detail::dot(q, q, dealias));
    return t;
}

}  // namespace

RigidLidTangent rigid_lid_rhs(const ScalarField& zeta2, const VectorField& v, const ScalarField& b,
                              const PhysicalParams& p) {
    return rigid_lid_tangent(zeta2, v, b, p, false);
}

double rigid_lid_cfl_limit(const GridSpec& grid, const PhysicalParams& p) {
    double dx = grid.dx();
    if (grid.dim == 2) dx = std::min(dx, grid.dy());
    const double c = std::sqrt((1.0 - p.gamma()) / (p.gamma() + p.delta()));
    return 0.5 * dx / c;
}

RigidLidState rigid_lid_step(const RigidLidState& s, const ScalarField& b, const PhysicalParams& p,
                             double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    const double limit = rigid_lid_cfl_limit(s.zeta2.grid(), p);
    if (dt > limit) {
        std::ostringstream msg;
        msg << "dt=" << dt << " exceeds the CFL limit " << limit;
        throw CflViolation(msg.str());
    }
    return detail::rk4(
        s, dt, [&](const RigidLidState& x) { return rigid_lid_tangent(x.zeta2, x.v, b, p, true); },
        [](const RigidLidState& x, double a, const RigidLidTangent& t) { return advance(x, a, t); });
}

}  // namespace stratwave
