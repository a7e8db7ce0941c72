#include "stratwave/dtn.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/spectral.hpp"
#include "terms.hpp"

namespace stratwave {

namespace {

void require_grid(const SurfaceState& s, const ScalarField& b, const char* what) {
    require_same_grid(s.grid(), b.grid(), what);
}

}  // namespace

VectorField t_operator(const ScalarField& h, const ScalarField& bshape, const VectorField& v) {
    return detail::t_operator(h, bshape, v, true);
}

ScalarField expand_g2(const SurfaceState& state, const ScalarField& b, const PhysicalParams& p,
                      int order) {
    if (order != 1 && order != 2) throw InvalidArgument("expand_g2 order must be 1 or 2");
    require_grid(state, b, "expand_g2");
    const auto s = detail::shapes(state.zeta1(), state.zeta2(), b, p, state.h_min());
    const VectorField& q2 = state.gradpsi2();
    ScalarField out = -p.mu() * div(s.h2 * q2);
    if (order == 2) out += p.mu() * p.mu() * div(detail::t_operator(s.h2, s.beta_b, q2, false));
    return out;
}

ScalarField expand_g1(const SurfaceState& state, const ScalarField& b, const PhysicalParams& p,
                      int order) {
    if (order != 1 && order != 2) throw InvalidArgument("expand_g1 order must be 1 or 2");
    require_grid(state, b, "expand_g1");
    const auto s = detail::shapes(state.zeta1(), state.zeta2(), b, p, state.h_min());
    const auto t = detail::terms(s, state.gradpsi1(), state.gradpsi2(), false);
    ScalarField out = -p.mu() * (t.a1 + t.a2);
    if (order == 2) out += p.mu() * p.mu() * detail::g1_second(s, t, false);
    return out;
}

VectorField expand_h(const SurfaceState& state, const ScalarField& b, const PhysicalParams& p,
                     int order) {
    if (order != 0 && order != 1) throw InvalidArgument("expand_h order must be 0 or 1");
    require_grid(state, b, "expand_h");
    const VectorField& q1 = state.gradpsi1();
    if (order == 0) return q1;
    const auto s = detail::shapes(state.zeta1(), state.zeta2(), b, p, state.h_min());
    const auto t = detail::terms(s, q1, state.gradpsi2(), false);
    return q1 + p.mu() * grad(detail::h_bracket(s, t, q1, false));
}

VectorField layer_mean_correction(const SurfaceState& state, const ScalarField& b,
                                  const PhysicalParams& p, int layer) {
    if (layer != 1 && layer != 2) throw InvalidArgument("layer must be 1 or 2");
    require_grid(state, b, "layer_mean_correction");
    const auto s = detail::shapes(state.zeta1(), state.zeta2(), b, p, state.h_min());
    const auto t = detail::terms(s, state.gradpsi1(), state.gradpsi2(), false);
    return layer == 1 ? detail::correction1(s, t, false) : detail::correction2(s, t, false);
}

std::pair<int, int> expansion_orders(ExpandedOperator op) {
    return op == ExpandedOperator::G1 || op == ExpandedOperator::G2 ? std::pair{1, 2} : std::pair{0, 1};
}

double expansion_error(ExpandedOperator op, int order, const SurfaceState& state, const ScalarField& b,
                       const PhysicalParams& p, int nz) {
    const auto [lo, hi] = expansion_orders(op);
    if (order != lo && order != hi) throw InvalidArgument("expansion order not available for this operator");
    const NumericOperators ops = numeric_operators(state, b, p, nz);
    switch (op) {
        case ExpandedOperator::G1: return (ops.g1 - expand_g1(state, b, p, order)).max_abs();
        case ExpandedOperator::G2: return (ops.g2 - expand_g2(state, b, p, order)).max_abs();
        case ExpandedOperator::H: return (ops.h - expand_h(state, b, p, order)).max_abs();
        case ExpandedOperator::Mean1:
        case ExpandedOperator::Mean2: {
            const bool upper = op == ExpandedOperator::Mean1;
            VectorField e = mean_velocity(upper ? ops.upper : ops.lower);
            e -= upper ? state.gradpsi1() : state.gradpsi2();
            if (order == 1) e.axpy(-p.mu(), layer_mean_correction(state, b, p, upper ? 1 : 2));
            return e.max_abs();
        }
    }
    throw InvalidArgument("unknown operator");
}

}  // namespace stratwave
