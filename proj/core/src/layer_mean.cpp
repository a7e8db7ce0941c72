#include <algorithm>
#include <sstream>

#include "integrators.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"
#include "terms.hpp"

namespace stratwave {

LayerMeanTangent& LayerMeanTangent::axpy(double a, const LayerMeanTangent& x) {
    dh1.axpy(a, x.dh1);
    dh2.axpy(a, x.dh2);
    du1.axpy(a, x.du1);
    du2.axpy(a, x.du2);
    return *this;
}

double LayerMeanTangent::max_abs() const {
    return std::max({dh1.max_abs(), dh2.max_abs(), du1.max_abs(), du2.max_abs()});
}

LayerMeanState advance(const LayerMeanState& s, double a, const LayerMeanTangent& t) {
    LayerMeanState out = s;
    out.h1.axpy(a, t.dh1);
    out.h2.axpy(a, t.dh2);
    out.u1.axpy(a, t.du1);
    out.u2.axpy(a, t.du2);
    return out;
}

LayerMeanState layer_mean_state(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                                VectorField u1, VectorField u2) {
    require_same_grid(s.grid(), u1.grid(), "layer_mean_state");
    require_same_grid(s.grid(), u2.grid(), "layer_mean_state");
    auto [h1, h2] = thicknesses(s, p, b);
    return {std::move(h1), std::move(h2), std::move(u1), std::move(u2)};
}

namespace {

void validate(const LayerMeanState& s, const ScalarField& b, const PhysicalParams& p, const char* what) {
    require_same_grid(s.h1.grid(), s.h2.grid(), what);
    require_same_grid(s.h1.grid(), s.u1.grid(), what);
    require_same_grid(s.h1.grid(), s.u2.grid(), what);
    require_same_grid(s.h1.grid(), b.grid(), what);
    if (!(p.eps2() > 0.0))
        throw InvalidParameter("the layer-mean systems are written for eps2 > 0");
    if (!(s.h1.min() > 0.0) || !(s.h2.min() > 0.0))
        throw ConnectednessViolation("nonpositive layer thickness");
}

// alpha grad zeta1 and grad zeta2 recovered from the thicknesses.
std::pair<VectorField, VectorField> elevation_gradients(const LayerMeanState& s, const ScalarField& b,
                                                        const PhysicalParams& p) {
    const double inv = 1.0 / p.eps2();
    const ScalarField bb = p.beta() * b;
    return {inv * grad(s.h1 + s.h2 + bb), inv * grad(s.h2 + bb)};
}

// Shallow-water part shared by the three systems.
LayerMeanTangent hydrostatic(const LayerMeanState& s, const ScalarField& b, const PhysicalParams& p,
                             bool dealias) {
    const double e2 = p.eps2();
    const double g = p.gamma();
    const auto [agz1, gz2] = elevation_gradients(s, b, p);
    LayerMeanTangent t{-e2 * div(detail::mul(s.h1, s.u1, dealias)),
                       -e2 * div(detail::mul(s.h2, s.u2, dealias)), VectorField(), VectorField()};
    t.du1 = -1.0 * agz1 - 0.5 * e2 * grad(detail::dot(s.u1, s.u1, dealias));
    t.du2 = -(1.0 - g) * gz2 - g * agz1 - 0.5 * e2 * grad(detail::dot(s.u2, s.u2, dealias));
    return t;
}

LayerMeanTangent tangent(LayerMeanVariant variant, const LayerMeanState& s, const ScalarField& b,
                         const PhysicalParams& p, bool dealias) {
    validate(s, b, p, "layer_mean_rhs");
    switch (variant) {
        case LayerMeanVariant::SwswLm:
            return hydrostatic(s, b, p, dealias);
        case LayerMeanVariant::BoussLm: {
            if (p.beta() != 0.0 && b.max_abs() != 0.0)
                throw Unsupported("the layer-mean Boussinesq system requires a flat bottom (beta b = 0)");
            LayerMeanTangent t = hydrostatic(s, b, p, dealias);
            auto [d1, d2] = boussinesq_solve_time_operator(t.du1, t.du2, p,
                                                           BoussinesqCoefficients::layer_mean());
            t.du1 = std::move(d1);
            t.du2 = std::move(d2);
            return t;
        }
        case LayerMeanVariant::HoLm:
            throw Unsupported(
                "the higher-order layer-mean system has time couplings; use ho_layer_mean_terms");
    }
    throw InvalidArgument("unknown layer-mean variant");
}

}  // namespace

LayerMeanTangent layer_mean_rhs(LayerMeanVariant variant, const LayerMeanState& s, const ScalarField& b,
                                const PhysicalParams& p) {
    return tangent(variant, s, b, p, false);
}

LayerMeanState layer_mean_step(LayerMeanVariant variant, const LayerMeanState& s, const ScalarField& b,
                               const PhysicalParams& p, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
    const double limit = cfl_limit(s.h1.grid(), p);
    if (dt > limit) {
        std::ostringstream msg;
        msg << "dt=" << dt << " exceeds the CFL limit " << limit;
        throw CflViolation(msg.str());
    }
    return detail::rk4(
        s, dt, [&](const LayerMeanState& x) { return tangent(variant, x, b, p, true); },
        [](const LayerMeanState& x, double a, const LayerMeanTangent& t) { return advance(x, a, t); });
}

namespace {

struct HigherOrderPieces {
    ScalarField hcal, n1, n2;
    VectorField d1, d2;
};

HigherOrderPieces pieces(const LayerMeanState& s, const ScalarField& b, const PhysicalParams& p) {
    const auto sh = detail::shapes_from_thicknesses(s.h1, s.h2, b, p);
    const auto t = detail::terms(sh, s.u1, s.u2, false);
    auto [n1, n2] = detail::nonlinear(sh, t, s.u1, s.u2, p.gamma());
    return {detail::h_bracket(sh, t, s.u1, false), std::move(n1), std::move(n2),
            detail::correction1(sh, t, false), detail::correction2(sh, t, false)};
}

double polynomial_step(const LayerMeanState& s, const LayerMeanTangent& t) {
    const double scale = std::max({1.0, s.h1.max_abs(), s.h2.max_abs(), s.u1.max_abs(), s.u2.max_abs()});
    const double rate = t.max_abs();
    return rate > 0.0 ? 1e-3 * scale / rate : 1.0;
}

}  // namespace

LayerMeanHigherOrderTerms ho_layer_mean_terms(const LayerMeanState& s, const ScalarField& b,
                                              const PhysicalParams& p) {
    validate(s, b, p, "ho_layer_mean_terms");
    const double mu = p.mu();
    const double e2 = p.eps2();
    const double g = p.gamma();
    const HigherOrderPieces hp = pieces(s, b, p);

    LayerMeanHigherOrderTerms out{hydrostatic(s, b, p, false), {}};
    out.spatial.du1 += mu * e2 * grad(hp.n1 + dot(s.u1, hp.d1));
    out.spatial.du2 += mu * e2 * grad(g * dot(s.u1, grad(hp.hcal)) + dot(s.u2, hp.d2) + hp.n2 + g * hp.n1);

    // D1, D2 are rational in the thicknesses; the stencil step is kept small.
    out.coupling = [s, b, p](const LayerMeanTangent& tan) {
        const double tau = polynomial_step(s, tan);
        struct Rates {
            VectorField d1, d2, ghcal;
            Rates& operator-=(const Rates& o) {
                d1 -= o.d1;
                d2 -= o.d2;
                ghcal -= o.ghcal;
                return *this;
            }
            Rates& operator*=(double a) {
                d1 *= a;
                d2 *= a;
                ghcal *= a;
                return *this;
            }
        };
        const Rates r = detail::four_point_derivative(
            [&](double e) {
                const HigherOrderPieces q = pieces(advance(s, e, tan), b, p);
                return Rates{q.d1, q.d2, grad(q.hcal)};
            },
            tau);
        const double m = p.mu();
        return std::pair<VectorField, VectorField>{m * r.d1, m * (p.gamma() * r.ghcal + r.d2)};
    };
    return out;
}

}  // namespace stratwave
