#pragma once

#include <utility>

#include "stratwave/grid.hpp"
#include "stratwave/params.hpp"

namespace stratwave {

inline constexpr double kDefaultHMin = 1e-3;

// Surface elevation, interface elevation and the two velocity-potential gradients.
class SurfaceState {
public:
    SurfaceState(ScalarField zeta1, ScalarField zeta2, VectorField gradpsi1,
                 VectorField gradpsi2, double h_min = kDefaultHMin);

    // Gradients are taken spectrally from the potentials.
    static SurfaceState from_potentials(const ScalarField& zeta1, const ScalarField& zeta2,
                                        const ScalarField& psi1, const ScalarField& psi2,
                                        double h_min = kDefaultHMin);
    static SurfaceState rest(const GridSpec& grid, double h_min = kDefaultHMin);

    const GridSpec& grid() const noexcept { return zeta1_.grid(); }
    const ScalarField& zeta1() const noexcept { return zeta1_; }
    const ScalarField& zeta2() const noexcept { return zeta2_; }
    const VectorField& gradpsi1() const noexcept { return gradpsi1_; }
    const VectorField& gradpsi2() const noexcept { return gradpsi2_; }
    double h_min() const noexcept { return h_min_; }

    // Zero-mean potentials recovered from the gradients.
    ScalarField psi1() const;
    ScalarField psi2() const;

private:
    ScalarField zeta1_, zeta2_;
    VectorField gradpsi1_, gradpsi2_;
    double h_min_;
};

// Time derivative of a SurfaceState.
struct SurfaceTangent {
    ScalarField dzeta1, dzeta2;
    VectorField dgradpsi1, dgradpsi2;

    static SurfaceTangent zero(const GridSpec& grid);
    SurfaceTangent& axpy(double a, const SurfaceTangent& x);
    double max_abs() const;
};

// state + a * tangent, with the same h_min.
SurfaceState advance(const SurfaceState& s, double a, const SurfaceTangent& t);

// (h1, h2) = (1 + eps1 zeta1 - eps2 zeta2, 1/delta - beta b + eps2 zeta2).
// Throws ConnectednessViolation if either falls below h_min.
std::pair<ScalarField, ScalarField> thicknesses(const SurfaceState& state,
                                                const PhysicalParams& params,
                                                const ScalarField& b);
std::pair<ScalarField, ScalarField> thicknesses(const ScalarField& zeta1,
                                                const ScalarField& zeta2,
                                                const ScalarField& b,
                                                const PhysicalParams& params,
                                                double h_min = kDefaultHMin);

}  // namespace stratwave
