#pragma once

#include <memory>
#include <vector>

#include "stratwave/grid.hpp"
#include "stratwave/params.hpp"
#include "stratwave/state.hpp"

namespace stratwave {

// ---------------------------------------------------------------------------
// Closed-form operators for flat surface, interface and bottom.

ScalarField g2_flat(const ScalarField& psi2, const PhysicalParams& params);
ScalarField g1_flat(const ScalarField& psi1, const ScalarField& psi2, const PhysicalParams& params);
VectorField h_flat(const ScalarField& psi1, const ScalarField& psi2, const PhysicalParams& params);

// ---------------------------------------------------------------------------
// Elliptic problem on a flattened strip.
//
// The layer is mapped to a unit strip with vertical coordinate z in
// [z_bottom, z_bottom + 1] (lower layer [-1, 0], upper layer [0, 1]) through
// s(X, z) = h(X) z + sigma(X), sigma = eps2 zeta2. The potential solves
// div_{X,z}(P grad_{X,z} phi) = 0 with
//   P = [[mu h, -mu s_x], [-mu s_x, (1 + mu s_x^2)/h]],
// phi given at the top and the upward co-normal flux e_z . P grad phi given at
// the bottom. Discretization: Fourier in X, Chebyshev-Gauss-Lobatto in z, one
// dense LU per geometry. Only d = 1 is supported.

enum class Layer { Lower, Upper };

inline constexpr double kStripTolerance = 1e-12;

class StripGeometry;

class StripSolution {
public:
    Layer which() const noexcept { return which_; }
    const GridSpec& grid() const noexcept;
    int nz() const noexcept;
    double mu() const noexcept;

    // Node coordinates in z, from top to bottom.
    const std::vector<double>& z() const noexcept;
    // Potential at vertical node iz (0 = top) and horizontal node ix.
    double phi(int iz, int ix) const;
    ScalarField level(int iz) const;

    ScalarField trace_top() const;
    ScalarField trace_bottom() const;
    ScalarField conormal_top() const;
    ScalarField conormal_bottom() const;
    // Horizontal gradient of the bottom trace in flattened coordinates.
    VectorField gradient_trace_bottom() const;

    // max |div P grad phi| over interior collocation nodes, relative to the
    // largest magnitude of the summed flux-derivative terms.
    double pde_residual() const;
    // Normwise relative residual of the linear solve.
    double linear_residual() const noexcept { return linear_residual_; }

    const ScalarField& thickness() const noexcept;

private:
    friend class StripProblem;
    friend VectorField mean_velocity(const StripSolution& strip);
    Layer which_ = Layer::Lower;
    std::shared_ptr<const StripGeometry> geo_;
    std::vector<double> phi_;
    double linear_residual_ = 0.0;
};

// Assembled and factorized strip operator, reusable for many boundary data.
class StripProblem {
public:
    StripProblem(Layer which, const ScalarField& thickness, const ScalarField& sigma, double mu,
                 int nz);
    ~StripProblem();
    StripProblem(StripProblem&&) noexcept;
    StripProblem& operator=(StripProblem&&) noexcept;

    // Throws SolverDivergence if the relative residual exceeds kStripTolerance.
    StripSolution solve(const ScalarField& dirichlet_top, const ScalarField& conormal_bottom) const;

    // Smallest eigenvalue of the pointwise coefficient matrix P over all nodes.
    double min_coercivity() const;
    const GridSpec& grid() const noexcept;
    int nz() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Lower layer: phi = psi2 at the interface, zero co-normal flux at the bottom.
// The k = 0 mode of psi2 is removed before solving.
StripSolution solve_lower(const ScalarField& zeta2, const ScalarField& b, const ScalarField& psi2,
                          const PhysicalParams& params, int nz, double h_min = kDefaultHMin);

// Upper layer: phi = psi1 at the surface, co-normal flux at the interface equal
// to the lower layer's co-normal trace (the numeric G2 psi2).
StripSolution solve_upper(const ScalarField& zeta1, const ScalarField& zeta2, const ScalarField& b,
                          const ScalarField& psi1, const ScalarField& psi2,
                          const PhysicalParams& params, int nz, double h_min = kDefaultHMin);

// Depth mean of the physical horizontal velocity across the layer.
VectorField mean_velocity(const StripSolution& strip);

struct NumericOperators {
    ScalarField g1;               // co-normal trace at the surface
    ScalarField g2;               // co-normal trace at the interface
    VectorField h;                // gradient of the upper potential's interface trace
    ScalarField interface_trace;  // upper potential at the interface
    StripSolution lower;
    StripSolution upper;
};

// Both layers for one geometry; factorizations are kept for repeated use.
class TwoLayerStrips {
public:
    TwoLayerStrips(const ScalarField& zeta1, const ScalarField& zeta2, const ScalarField& b,
                   const PhysicalParams& params, int nz, double h_min = kDefaultHMin);

    NumericOperators apply(const ScalarField& psi1, const ScalarField& psi2) const;
    const StripProblem& lower() const noexcept { return lower_; }
    const StripProblem& upper() const noexcept { return upper_; }

private:
    StripProblem lower_;
    StripProblem upper_;
};

NumericOperators numeric_operators(const SurfaceState& state, const ScalarField& b,
                                   const PhysicalParams& params, int nz);

// ---------------------------------------------------------------------------
// Shallow-water expansions.

// T[h, bshape]V = -1/3 grad(h^3 div V) + 1/2 (grad(h^2 grad bshape . V) - h^2 grad bshape div V)
//                 + h grad bshape (grad bshape . V)
VectorField t_operator(const ScalarField& h, const ScalarField& bshape, const VectorField& v);

// Order 1: -mu div(h2 grad psi2). Order 2 adds mu^2 div T[h2, beta b] grad psi2.
ScalarField expand_g2(const SurfaceState& state, const ScalarField& b, const PhysicalParams& params,
                      int order);
// Order 1: -mu (A1 + A2) with Ai = div(hi grad psii). Order 2 adds the mu^2 bracket.
ScalarField expand_g1(const SurfaceState& state, const ScalarField& b, const PhysicalParams& params,
                      int order);
// Order 0: grad psi1. Order 1 adds mu grad(h1 (A1 + A2) - h1^2 lap psi1 / 2 - h1 eps1 grad zeta1 . grad psi1).
VectorField expand_h(const SurfaceState& state, const ScalarField& b, const PhysicalParams& params,
                     int order);
// Correction D_i with mean velocity ~ grad psi_i + mu D_i.
VectorField layer_mean_correction(const SurfaceState& state, const ScalarField& b,
                                  const PhysicalParams& params, int layer);

enum class ExpandedOperator { G1, G2, H, Mean1, Mean2 };

// Orders available for an operator: {1, 2} for G1, G2 and {0, 1} for H and the
// depth means (grad psi_i, then grad psi_i + mu D_i).
std::pair<int, int> expansion_orders(ExpandedOperator op);

// max |numeric - expansion| over the grid, numeric from the strip solver.
double expansion_error(ExpandedOperator op, int order, const SurfaceState& state, const ScalarField& b,
                       const PhysicalParams& params, int nz);

}  // namespace stratwave
