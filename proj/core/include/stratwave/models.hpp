#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stratwave/dispersion.hpp"
#include "stratwave/grid.hpp"
#include "stratwave/params.hpp"
#include "stratwave/state.hpp"

namespace stratwave {

// ---------------------------------------------------------------------------
// Shallow water / shallow water.

// Time derivative of (zeta1, zeta2, grad psi1, grad psi2). Throws DegenerateAlpha
// when alpha = 0 (use the rigid-lid system).
SurfaceTangent swsw_rhs(const SurfaceState& state, const ScalarField& b, const PhysicalParams& params);

// One classical RK4 step with 2/3-rule dealiasing of the quadratic terms.
// Throws HyperbolicityLoss if the symmetrizability assumptions fail at the
// current state and CflViolation if dt > 0.5 dx / c+.
SurfaceState swsw_step(const SurfaceState& state, const ScalarField& b, const PhysicalParams& params,
                       double dt);

// Largest stable step of the CFL guard: 0.5 dx / c+, c+ the fast shallow-water speed.
double cfl_limit(const GridSpec& grid, const PhysicalParams& params);

struct Diagnostics {
    double mass1 = 0.0;
    double mass2 = 0.0;
    std::vector<double> momentum;
    double energy = 0.0;
};

// Integrals of h1, h2, gamma h1 u1 + h2 u2 and
// (gamma h1 |u1|^2 + h2 |u2|^2) / 2 + gamma h1^2 / 2 + h2^2 / 2 + gamma h1 h2, u_i = eps2 grad psi_i.
Diagnostics conservation_diagnostics(const SurfaceState& state, const ScalarField& b,
                                     const PhysicalParams& params);

// ---------------------------------------------------------------------------
// Quasilinear form and symmetrizer.

// U = (h1, h2, u1, u2) with u_i = eps2 grad psi_i. When floor is set the
// assumptions are checked with that h; otherwise with the best admissible h,
// i.e. max |u_i|^2 < min h_i over the grid.
struct QuasilinearState {
    ScalarField h1, h2;
    VectorField u1, u2;
    std::optional<double> floor;

    static QuasilinearState from_surface(const SurfaceState& state, const ScalarField& b,
                                         const PhysicalParams& params);
};

struct PositiveDefinite {
    double max_asymmetry = 0.0;  // max |S A - (S A)^T| over nodes and sampled directions
};

struct Indefinite {
    std::size_t index = 0;  // grid node of the witness
    std::string reason;
    double max_asymmetry = 0.0;
};

using SymmetrizerVerdict = std::variant<PositiveDefinite, Indefinite>;

SymmetrizerVerdict symmetrizer_check(const QuasilinearState& q, const PhysicalParams& params);

// Pointwise 6 x 6 matrices, row-major, for U = (h1, h2, u1x, u1y, u2x, u2y).
using Matrix6 = std::array<double, 36>;
Matrix6 symmetrizer_matrix(double h1, double h2, const std::array<double, 2>& u1,
                           const std::array<double, 2>& u2, double gamma);
Matrix6 flux_matrix(double h1, double h2, const std::array<double, 2>& u1,
                    const std::array<double, 2>& u2, double gamma, const std::array<double, 2>& xi);

enum class SymmetrizerCondition { H1AboveFloor, H2AboveFloor, U1BelowFloor, U2BelowFloor, Product };

// Random single-node 2D states with a floor h. Without a condition every state
// satisfies all assumptions; otherwise the named one fails and the box
// conditions on the others hold.
std::vector<QuasilinearState> sample_quasilinear_states(std::size_t count,
                                                        std::optional<SymmetrizerCondition> violated,
                                                        double gamma, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Boussinesq family with coefficients (a1, a2, b1), flat bottom.
//
// The velocity slots of SurfaceState hold u1, u2 (equal to grad psi_i for the
// original coefficients (0, 0, 0)).

// Velocity variables of the family built from grad psi_i:
// u1 = q1 - mu b1 lap q1 - mu (a1 / delta) lap q2,  u2 = q2 - mu (a2 / delta^2) lap q2.
std::pair<VectorField, VectorField> boussinesq_velocities(const VectorField& q1, const VectorField& q2,
                                                          const PhysicalParams& params,
                                                          const BoussinesqCoefficients& c);

// Right-hand sides before the time operator is inverted: the zeta entries are
// time derivatives; the velocity entries are F_i in M (d_t u1, d_t u2) = (F1, F2).
SurfaceTangent boussinesq_forcing(const SurfaceState& state, const ScalarField& b,
                                  const PhysicalParams& params, const BoussinesqCoefficients& c,
                                  bool dealias = false);

// Applies M = [[1 + mu b1 lap, mu (a1/delta) lap], [-mu (gamma/2) lap, 1 + mu (a2/delta^2 - gamma/delta) lap]].
std::pair<VectorField, VectorField> boussinesq_time_operator(const VectorField& v1, const VectorField& v2,
                                                             const PhysicalParams& params,
                                                             const BoussinesqCoefficients& c);
// Inverts it modewise. Throws SingularTimeOperator at a singular grid mode.
std::pair<VectorField, VectorField> boussinesq_solve_time_operator(const VectorField& f1,
                                                                   const VectorField& f2,
                                                                   const PhysicalParams& params,
                                                                   const BoussinesqCoefficients& c);

SurfaceTangent boussinesq_rhs(const SurfaceState& state, const ScalarField& b,
                              const PhysicalParams& params, const BoussinesqCoefficients& c);
SurfaceState boussinesq_step(const SurfaceState& state, const ScalarField& b,
                             const PhysicalParams& params, const BoussinesqCoefficients& c, double dt);

// ---------------------------------------------------------------------------
// Higher-order system. No stepper: the linearization is ill-posed.

// Spatial terms with every equation solved for its time derivative, and the
// linear map tangent -> mu gamma grad(d_t Hcal) that closes the last equation:
// d_t grad psi2 = spatial.dgradpsi2 + coupling(tangent).
struct HigherOrderTerms {
    SurfaceTangent spatial;
    std::function<VectorField(const SurfaceTangent&)> coupling;
};

HigherOrderTerms ho_rhs(const SurfaceState& state, const ScalarField& b, const PhysicalParams& params);

// Hcal = h1 (A1 + A2 - h1 div q1 / 2 - eps1 grad zeta1 . q1).
ScalarField ho_hcal(const SurfaceState& state, const ScalarField& b, const PhysicalParams& params);
// N1 = (eps1 grad zeta1 . q1 - A1 - A2)^2 / 2,
// N2 = ((eps2 grad zeta2 . q2 - A2)^2 - gamma (eps2 grad zeta2 . q1 - A2)^2) / 2.
std::pair<ScalarField, ScalarField> ho_nonlinear(const SurfaceState& state, const ScalarField& b,
                                                 const PhysicalParams& params);

// ---------------------------------------------------------------------------
// Rigid lid (alpha = 0), flat bottom.

// V = grad p with div((1 + zeta) V) = div W, by preconditioned conjugate gradients.
// Throws CoefficientDegenerate if min(1 + zeta) <= 0 and NoConvergence.
VectorField rigid_lid_solve_q(const ScalarField& zeta, const VectorField& w);

struct RigidLidState {
    ScalarField zeta2;
    VectorField v;  // shear velocity grad psi2 - gamma grad psi1
};

struct RigidLidTangent {
    ScalarField dzeta2;
    VectorField dv;

    RigidLidTangent& axpy(double a, const RigidLidTangent& x);
};

RigidLidState advance(const RigidLidState& s, double a, const RigidLidTangent& t);

// Coefficient of the nonlocal operator: (gamma - 1) / (gamma + delta) delta eps2 zeta2.
ScalarField rigid_lid_coefficient(const ScalarField& zeta2, const PhysicalParams& params);

RigidLidTangent rigid_lid_rhs(const ScalarField& zeta2, const VectorField& v, const ScalarField& b,
                              const PhysicalParams& params);
RigidLidState rigid_lid_step(const RigidLidState& state, const ScalarField& b,
                             const PhysicalParams& params, double dt);
double rigid_lid_cfl_limit(const GridSpec& grid, const PhysicalParams& params);

// ---------------------------------------------------------------------------
// Layer-mean systems in (h1, h2, u1bar, u2bar).

enum class LayerMeanVariant { SwswLm, BoussLm, HoLm };

struct LayerMeanState {
    ScalarField h1, h2;
    VectorField u1, u2;  // depth-mean velocities
};

struct LayerMeanTangent {
    ScalarField dh1, dh2;
    VectorField du1, du2;

    LayerMeanTangent& axpy(double a, const LayerMeanTangent& x);
    double max_abs() const;
};

LayerMeanState advance(const LayerMeanState& s, double a, const LayerMeanTangent& t);

// Thicknesses from the surface state; velocities supplied by the caller
// (numeric depth means or their expansions).
LayerMeanState layer_mean_state(const SurfaceState& state, const ScalarField& b,
                                const PhysicalParams& params, VectorField u1, VectorField u2);

// Explicit systems: SwswLm, and BoussLm with its time operator inverted.
// HoLm has time couplings; it throws Unsupported here (see ho_layer_mean_terms).
LayerMeanTangent layer_mean_rhs(LayerMeanVariant variant, const LayerMeanState& state,
                                const ScalarField& b, const PhysicalParams& params);
LayerMeanState layer_mean_step(LayerMeanVariant variant, const LayerMeanState& state,
                               const ScalarField& b, const PhysicalParams& params, double dt);

struct LayerMeanHigherOrderTerms {
    LayerMeanTangent spatial;
    // (du1, du2) contributions mu d_t D1 and mu d_t(gamma grad Hcal + D2) along a tangent.
    std::function<std::pair<VectorField, VectorField>(const LayerMeanTangent&)> coupling;
};

LayerMeanHigherOrderTerms ho_layer_mean_terms(const LayerMeanState& state, const ScalarField& b,
                                              const PhysicalParams& params);

Diagnostics conservation_diagnostics(const LayerMeanState& state, const PhysicalParams& params);

}  // namespace stratwave
