#pragma once

namespace stratwave::detail {

// Classical fourth-order Runge-Kutta step; advance(s, a, t) returns s + a t.
template <class State, class Rhs, class Advance>
State rk4(const State& s, double dt, Rhs&& rhs, Advance&& advance) {
    auto k1 = rhs(s);
    auto k2 = rhs(advance(s, 0.5 * dt, k1));
    auto k3 = rhs(advance(s, 0.5 * dt, k2));
    auto k4 = rhs(advance(s, dt, k3));
    k1.axpy(2.0, k2).axpy(2.0, k3).axpy(1.0, k4);
    return advance(s, dt / 6.0, k1);
}

}  // namespace stratwave::detail
