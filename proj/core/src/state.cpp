#include "stratwave/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratwave/errors.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

namespace {

void require_curl_free(const VectorField& v, const char* name) {
    if (v.dim() != 2) return;
    const double c = curl(v).l2_norm();
    const double n = v.l2_norm();
    if (c > 1e-10 * std::max(n, 1e-300) && c > 1e-14)
        throw InvalidArgument(std::string(name) + " is not curl-free");
}

}  // namespace

SurfaceState::SurfaceState(ScalarField zeta1, ScalarField zeta2, VectorField gradpsi1,
                           VectorField gradpsi2, double h_min)
    : zeta1_(std::move(zeta1)), zeta2_(std::move(zeta2)), gradpsi1_(std::move(gradpsi1)),
      gradpsi2_(std::move(gradpsi2)), h_min_(h_min) {
    if (!(h_min_ > 0.0) || !std::isfinite(h_min_))
        throw InvalidArgument("h_min must be positive");
    const GridSpec& g = zeta1_.grid();
    require_same_grid(g, zeta2_.grid(), "SurfaceState");
    require_same_grid(g, gradpsi1_.grid(), "SurfaceState");
    require_same_grid(g, gradpsi2_.grid(), "SurfaceState");
    if (gradpsi1_.dim() != g.dim || gradpsi2_.dim() != g.dim)
        throw InvalidArgument("gradient component count must equal grid dimension");
    if (!zeta1_.all_finite() || !zeta2_.all_finite() || !gradpsi1_.all_finite() ||
        !gradpsi2_.all_finite())
        throw InvalidArgument("state samples must be finite");
    require_curl_free(gradpsi1_, "gradpsi1");
    require_curl_free(gradpsi2_, "gradpsi2");
}

SurfaceState SurfaceState::from_potentials(const ScalarField& zeta1, const ScalarField& zeta2,
                                           const ScalarField& psi1, const ScalarField& psi2,
                                           double h_min) {
    return SurfaceState(zeta1, zeta2, grad(psi1), grad(psi2), h_min);
}

SurfaceState SurfaceState::rest(const GridSpec& grid, double h_min) {
    return SurfaceState(ScalarField(grid), ScalarField(grid), VectorField(grid),
                        VectorField(grid), h_min);
}

ScalarField SurfaceState::psi1() const { return potential_from_gradient(gradpsi1_); }
ScalarField SurfaceState::psi2() const { return potential_from_gradient(gradpsi2_); }

SurfaceTangent SurfaceTangent::zero(const GridSpec& grid) {
    return {ScalarField(grid), ScalarField(grid), VectorField(grid), VectorField(grid)};
}

SurfaceTangent& SurfaceTangent::axpy(double a, const SurfaceTangent& x) {
    dzeta1.axpy(a, x.dzeta1);
    dzeta2.axpy(a, x.dzeta2);
    dgradpsi1.axpy(a, x.dgradpsi1);
    dgradpsi2.axpy(a, x.dgradpsi2);
    return *this;
}

double SurfaceTangent::max_abs() const {
    return std::max({dzeta1.max_abs(), dzeta2.max_abs(), dgradpsi1.max_abs(),
                     dgradpsi2.max_abs()});
}

SurfaceState advance(const SurfaceState& s, double a, const SurfaceTangent& t) {
    ScalarField z1 = s.zeta1();
    ScalarField z2 = s.zeta2();
    VectorField q1 = s.gradpsi1();
    VectorField q2 = s.gradpsi2();
    z1.axpy(a, t.dzeta1);
    z2.axpy(a, t.dzeta2);
    q1.axpy(a, t.dgradpsi1);
    q2.axpy(a, t.dgradpsi2);
    return SurfaceState(std::move(z1), std::move(z2), std::move(q1), std::move(q2), s.h_min());
}

std::pair<ScalarField, ScalarField> thicknesses(const ScalarField& zeta1,
                                                const ScalarField& zeta2,
                                                const ScalarField& b,
                                                const PhysicalParams& p, double h_min) {
    require_same_grid(zeta1.grid(), zeta2.grid(), "thicknesses");
    require_same_grid(zeta1.grid(), b.grid(), "thicknesses");
    ScalarField h1 = 1.0 + p.eps1() * zeta1 - p.eps2() * zeta2;
    ScalarField h2 = 1.0 / p.delta() - p.beta() * b + p.eps2() * zeta2;
    const double m1 = h1.min();
    const double m2 = h2.min();
    if (m1 < h_min || m2 < h_min) {
        std::ostringstream msg;
        msg << "layer thickness below h_min=" << h_min << " (min h1=" << m1
            << ", min h2=" << m2 << ")";
        throw ConnectednessViolation(msg.str());
    }
    return {std::move(h1), std::move(h2)};
}

std::pair<ScalarField, ScalarField> thicknesses(const SurfaceState& state,
                                                const PhysicalParams& params,
                                                const ScalarField& b) {
    return thicknesses(state.zeta1(), state.zeta2(), b, params, state.h_min());
}

}  // namespace stratwave
