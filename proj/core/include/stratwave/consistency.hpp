#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stratwave/dispersion.hpp"
#include "stratwave/dtn.hpp"
#include "stratwave/grid.hpp"
#include "stratwave/models.hpp"
#include "stratwave/params.hpp"
#include "stratwave/state.hpp"

namespace stratwave {

// ---------------------------------------------------------------------------
// Full system, evaluated instantaneously with the numeric operators.

inline constexpr int kDefaultConsistencyNz = 32;

// Time derivative of (zeta1, zeta2, grad psi1, grad psi2) under the full
// two-layer system. The interface equation is closed by solving
// (I - gamma Phi2) d_t psi2 = S2 + gamma (d_shape Phi [d_t zeta] + Phi1 d_t psi1),
// Phi = Phi1 psi1 + Phi2 psi2 the upper potential at the interface.
// Requires d = 1 and alpha > 0.
SurfaceTangent full_system_tangent(const SurfaceState& state, const ScalarField& b,
                                   const PhysicalParams& params, int nz = kDefaultConsistencyNz);

// Nonlinear terms of the full system for given numeric operators.
std::pair<ScalarField, ScalarField> full_nonlinear(const SurfaceState& state,
                                                   const NumericOperators& ops,
                                                   const PhysicalParams& params);

struct OperatorRates {
    ScalarField dg1, dg2;
    VectorField dh;
};

// d/dt of the numeric G1, G2, H along the full-system flow: centered
// differences over +-tau Euler steps, Richardson-extrapolated from tau and
// tau/2. tau is halved until the error estimate is within 1% of the result;
// StepTooLarge after kMaxStepHalvings halvings.
inline constexpr int kMaxStepHalvings = 6;
OperatorRates operator_time_derivative(const SurfaceState& state, const ScalarField& b,
                                       const PhysicalParams& params, double tau,
                                       int nz = kDefaultConsistencyNz);

// Numeric depth means (upper, lower) of the horizontal velocity.
std::pair<VectorField, VectorField> numeric_layer_means(const SurfaceState& state, const ScalarField& b,
                                                        const PhysicalParams& params,
                                                        int nz = kDefaultConsistencyNz);

// ---------------------------------------------------------------------------
// Residuals.

enum class Model { Swsw, Bouss, Ho, SwswLm, BoussLm, HoLm };

struct ModelSpec {
    Model kind = Model::Swsw;
    BoussinesqCoefficients coeffs{};  // used by Bouss only

    static ModelSpec swsw() { return {Model::Swsw, {}}; }
    static ModelSpec bouss(const BoussinesqCoefficients& c) { return {Model::Bouss, c}; }
    static ModelSpec ho() { return {Model::Ho, {}}; }
    static ModelSpec swsw_lm() { return {Model::SwswLm, {}}; }
    static ModelSpec bouss_lm() { return {Model::BoussLm, {}}; }
    static ModelSpec ho_lm() { return {Model::HoLm, {}}; }
};

std::string model_name(Model m);
Model parse_model(const std::string& name);  // throws InvalidArgument

inline constexpr double kResidualSobolevIndex = 2.0;

// Discrete H^2 norms of the four equations' residuals, lhs - rhs with the
// full-system time derivatives substituted. Equations are ordered as the
// model's unknowns: (zeta1, zeta2, u1, u2) or (h1, h2, u1bar, u2bar).
struct Residual {
    std::array<double, 4> norms{};
    double total() const;  // Euclidean combination
};

std::array<std::string, 4> equation_names(Model m);

Residual residual(const ModelSpec& model, const SurfaceState& state, const ScalarField& b,
                  const PhysicalParams& params, int nz = kDefaultConsistencyNz);

// ---------------------------------------------------------------------------
// Rate sweeps.

struct SweepPoint {
    double mu = 0.0;
    Residual residual;
    double noise = 0.0;  // |residual(nz) - residual(nz_coarse)|, a discretization-error estimate
    bool below_noise_floor = false;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::array<double, 4> slopes{};
    double slope = 0.0;  // of the total
    bool below_noise_floor = false;  // set if any point is flagged
};

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SweepOptions {
    int nz = kDefaultConsistencyNz;
    int nz_coarse = 24;
    int jobs = 1;
};

using StateFamily = std::function<SurfaceState(double mu)>;
using ParamsFamily = std::function<PhysicalParams(double mu)>;

// Requires at least four values of mu spanning 1.5 decades. A failing point is
// rethrown as an Error carrying the original name and the offending mu.
SweepResult rate_sweep(const ModelSpec& model, const StateFamily& states, const ScalarField& b,
                       const ParamsFamily& params, const std::vector<double>& mus,
                       const SweepOptions& options = {});

// ---------------------------------------------------------------------------
// Default deterministic families on a 2 pi periodic line.

enum class Regime {
    ShallowWater,  // eps1 = eps2 = 0.5, beta = 0.5
    Weakly,        // eps1 = eps2 = mu, flat bottom
    HigherOrder,   // eps1 = eps2 = 0.5, beta = 0.5
};

inline constexpr std::uint64_t kDefaultFamilySeed = 20080101;
inline constexpr double kFamilyGamma = 0.8;
inline constexpr double kFamilyDelta = 0.5;

GridSpec family_grid(int nx = 32);
PhysicalParams family_params(Regime regime, double mu);
// Single-bump cosine surfaces and bottom, two-mode potentials with seeded phases.
SurfaceState family_state(const GridSpec& grid, std::uint64_t seed = kDefaultFamilySeed);
ScalarField family_bottom(const GridSpec& grid, Regime regime);
// Regime in which a model's order is claimed.
Regime model_regime(Model m);
std::vector<double> default_mus();

}  // namespace stratwave
