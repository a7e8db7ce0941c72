#pragma once

#include <utility>

#include "stratwave/grid.hpp"
#include "stratwave/params.hpp"

namespace stratwave::detail {

// Pointwise product, projected by the 2/3 rule when dealias is set.
ScalarField mul(const ScalarField& a, const ScalarField& b, bool dealias);
VectorField mul(const ScalarField& a, const VectorField& v, bool dealias);
ScalarField dot(const VectorField& a, const VectorField& b, bool dealias);

VectorField t_operator(const ScalarField& h, const ScalarField& bshape, const VectorField& v,
                       bool dealias);

// Geometry shared by the expansions: thicknesses and scaled shape fields.
struct Shapes {
    ScalarField h1, h2;
    ScalarField eps2_zeta2;
    ScalarField beta_b;
    VectorField eps1_grad_zeta1;
};

Shapes shapes(const ScalarField& zeta1, const ScalarField& zeta2, const ScalarField& b,
              const PhysicalParams& p, double h_min);
// Shapes from given thicknesses (layer-mean unknowns).
Shapes shapes_from_thicknesses(const ScalarField& h1, const ScalarField& h2, const ScalarField& b,
                               const PhysicalParams& p);

// Velocity-dependent pieces of the expansions, for velocity fields q1, q2
// standing for grad psi1, grad psi2 (or the layer means).
struct Terms {
    ScalarField a1, a2;  // div(h1 q1), div(h2 q2)
    VectorField t1, t2;  // T[h1, eps2 zeta2] q1, T[h2, beta b] q2
};

Terms terms(const Shapes& s, const VectorField& q1, const VectorField& q2, bool dealias);

// mu^2 bracket of the second-order surface expansion, without the mu^2.
ScalarField g1_second(const Shapes& s, const Terms& t, bool dealias);
// h1 (A1 + A2) - h1^2 div q1 / 2 - h1 eps1 grad zeta1 . q1
ScalarField h_bracket(const Shapes& s, const Terms& t, const VectorField& q1, bool dealias);
// Layer-mean corrections D1, D2.
VectorField correction1(const Shapes& s, const Terms& t, bool dealias);
VectorField correction2(const Shapes& s, const Terms& t, bool dealias);

// (N1, N2) of the higher-order system for velocity fields q1, q2.
std::pair<ScalarField, ScalarField> nonlinear(const Shapes& s, const Terms& t, const VectorField& q1,
                                              const VectorField& q2, double gamma);

// Derivative at 0 of a smooth one-parameter family by the fourth-order
// centered stencil (exact for polynomials of degree <= 4).
template <class F>
auto four_point_derivative(F&& f, double tau) {
    auto d = f(tau);
    d -= f(-tau);
    d *= 8.0;
    auto far = f(2.0 * tau);
    far -= f(-2.0 * tau);
    d -= far;
    d *= 1.0 / (12.0 * tau);
    return d;
}

}  // namespace stratwave::detail
