#include "terms.hpp"

#include "stratwave/spectral.hpp"
#include "stratwave/state.hpp"

namespace stratwave::detail {

ScalarField mul(const ScalarField& a, const ScalarField& b, bool dealias) {
    ScalarField out = a * b;
    return dealias ? stratwave::dealias(out) : out;
}

VectorField mul(const ScalarField& a, const VectorField& v, bool dealias) {
    VectorField out = a * v;
    return dealias ? stratwave::dealias(out) : out;
}

ScalarField dot(const VectorField& a, const VectorField& b, bool dealias) {
    ScalarField out = stratwave::dot(a, b);
    return dealias ? stratwave::dealias(out) : out;
}

VectorField t_operator(const ScalarField& h, const ScalarField& bshape, const VectorField& v,
                       bool dealias) {
    require_same_grid(h.grid(), bshape.grid(), "t_operator");
    require_same_grid(h.grid(), v.grid(), "t_operator");
    const ScalarField h2 = mul(h, h, dealias);
    const ScalarField h3 = mul(h2, h, dealias);
    const ScalarField divv = div(v);
    const VectorField gb = grad(bshape);
    const ScalarField gbv = dot(gb, v, dealias);

    VectorField out = (-1.0 / 3.0) * grad(mul(h3, divv, dealias));
    out += 0.5 * grad(mul(h2, gbv, dealias));
    out -= 0.5 * mul(mul(h2, divv, dealias), gb, dealias);
    out += mul(mul(h, gbv, dealias), gb, dealias);
    return out;
}

Shapes shapes(const ScalarField& zeta1, const ScalarField& zeta2, const ScalarField& b,
              const PhysicalParams& p, double h_min) {
    auto [h1, h2] = thicknesses(zeta1, zeta2, b, p, h_min);
    return {std::move(h1), std::move(h2), p.eps2() * zeta2, p.beta() * b,
            p.eps1() * grad(zeta1)};
}

Shapes shapes_from_thicknesses(const ScalarField& h1, const ScalarField& h2, const ScalarField& b,
                               const PhysicalParams& p) {
    // eps2 zeta2 = h2 - 1/delta + beta b and eps1 zeta1 = h1 + eps2 zeta2 - 1
    ScalarField e2z2 = h2 - 1.0 / p.delta() + p.beta() * b;
    ScalarField e1z1 = h1 + e2z2 - 1.0;
    return {h1, h2, std::move(e2z2), p.beta() * b, grad(e1z1)};
}

Terms terms(const Shapes& s, const VectorField& q1, const VectorField& q2, bool dealias) {
    return {div(mul(s.h1, q1, dealias)), div(mul(s.h2, q2, dealias)),
            t_operator(s.h1, s.eps2_zeta2, q1, dealias), t_operator(s.h2, s.beta_b, q2, dealias)};
}

ScalarField g1_second(const Shapes& s, const Terms& t, bool dealias) {
    ScalarField out = div(t.t1) + div(t.t2);
    out -= 0.5 * div(mul(mul(s.h1, s.h1, dealias), grad(t.a2), dealias));
    out -= div(mul(mul(s.h1, t.a2, dealias), s.eps1_grad_zeta1, dealias));
    return out;
}

ScalarField h_bracket(const Shapes& s, const Terms& t, const VectorField& q1, bool dealias) {
    ScalarField out = mul(s.h1, t.a1 + t.a2, dealias);
    out -= 0.5 * mul(mul(s.h1, s.h1, dealias), div(q1), dealias);
    out -= mul(s.h1, dot(s.eps1_grad_zeta1, q1, dealias), dealias);
    return out;
}

VectorField correction1(const Shapes& s, const Terms& t, bool dealias) {
    VectorField inner = t.t1;
    inner -= 0.5 * mul(mul(s.h1, s.h1, dealias), grad(t.a2), dealias);
    inner -= mul(mul(s.h1, t.a2, dealias), s.eps1_grad_zeta1, dealias);
    return mul(s.h1.map([](double v) { return -1.0 / v; }), inner, dealias);
}

VectorField correction2(const Shapes& s, const Terms& t, bool dealias) {
    return mul(s.h2.map([](double v) { return -1.0 / v; }), t.t2, dealias);
}

std::pair<ScalarField, ScalarField> nonlinear(const Shapes& s, const Terms& t, const VectorField& q1,
                                              const VectorField& q2, double gamma) {
    const VectorField e2gz2 = grad(s.eps2_zeta2);
    const ScalarField w1 = stratwave::dot(s.eps1_grad_zeta1, q1) - t.a1 - t.a2;
    const ScalarField w2 = stratwave::dot(e2gz2, q2) - t.a2;
    const ScalarField w3 = stratwave::dot(e2gz2, q1) - t.a2;
    return {0.5 * w1 * w1, 0.5 * (w2 * w2 - gamma * (w3 * w3))};
}

}  // namespace stratwave::detail
