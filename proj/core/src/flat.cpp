#include <algorithm>
#include <cmath>

#include "stratwave/dtn.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

namespace {

double sech(double x) { return 1.0 / std::cosh(std::min(std::abs(x), 700.0)); }

}  // namespace

ScalarField g2_flat(const ScalarField& psi2, const PhysicalParams& p) {
    const double s = std::sqrt(p.mu());
    const double d = p.delta();
    return apply_multiplier(psi2, [s, d](const Wavevector& k) {
        const double kn = k.norm();
        return s * kn * std::tanh(s * kn / d);
    });
}

ScalarField g1_flat(const ScalarField& psi1, const ScalarField& psi2, const PhysicalParams& p) {
    require_same_grid(psi1.grid(), psi2.grid(), "g1_flat");
    const double s = std::sqrt(p.mu());
    const double d = p.delta();
    ScalarField out = apply_multiplier(psi1, [s](const Wavevector& k) {
        const double kn = k.norm();
        return s * kn * std::tanh(s * kn);
    });
    out += apply_multiplier(psi2, [s, d](const Wavevector& k) {
        const double kn = k.norm();
        return s * kn * std::tanh(s * kn / d) * sech(s * kn);
    });
    return out;
}

VectorField h_flat(const ScalarField& psi1, const ScalarField& psi2, const PhysicalParams& p) {
    require_same_grid(psi1.grid(), psi2.grid(), "h_flat");
    const double s = std::sqrt(p.mu());
    const double d = p.delta();
    ScalarField trace = apply_multiplier(psi1, [s](const Wavevector& k) { return sech(s * k.norm()); });
    trace -= apply_multiplier(psi2, [s, d](const Wavevector& k) {
        const double kn = k.norm();
        return std::tanh(s * kn / d) * std::tanh(s * kn);
    });
    return grad(trace);
}

}  // namespace stratwave
