#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "stratwave/params.hpp"

namespace stratwave {

// Positive frequencies of the two branches, omega_minus <= omega_plus.
struct Frequencies {
    double minus = 0.0;
    double plus = 0.0;
};

// Full linearized system. Throws NoRealRoots when a root omega^2 is not positive
// (possible only for gamma >= 1) and InvalidArgument for k <= 0.
Frequencies full_dispersion(double k, const PhysicalParams& params);

// Shallow-water limit: omega^2 = (1 + delta +- sqrt((1 - delta)^2 + 4 gamma delta)) / (2 delta) k^2.
Frequencies sw_dispersion(double k, const PhysicalParams& params);

// Free coefficients of the Boussinesq family. (0, 0, 0) is the original system,
// (-1/2, -1/3, -1/3) the layer-mean one.
struct BoussinesqCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
    double b1 = 0.0;

    double alpha1(double delta) const { return (1.0 + 2.0 * a1) / (2.0 * delta); }
    double alpha2(double delta) const { return (1.0 + 3.0 * a2) / (3.0 * delta * delta * delta); }
    double beta1() const { return (1.0 + 3.0 * b1) / 3.0; }

    static BoussinesqCoefficients original() { return {0.0, 0.0, 0.0}; }
    static BoussinesqCoefficients layer_mean() { return {-0.5, -1.0 / 3.0, -1.0 / 3.0}; }
};

// omega^4 - A(Y) k^2 omega^2 + B(Y) k^4 = 0 with Y = mu k^2.
struct QuadraticSymbols {
    double a = 0.0;
    double b = 0.0;
};
QuadraticSymbols boussinesq_symbols(double y, const PhysicalParams& params,
                                    const BoussinesqCoefficients& c);

struct IllPosedAt {
    double k = 0.0;
};
using BoussinesqRoots = std::variant<Frequencies, IllPosedAt>;

BoussinesqRoots boussinesq_dispersion(double k, const PhysicalParams& params,
                                      const BoussinesqCoefficients& c);

struct WellPosed {};
struct IllPosed {
    double first_bad_k = 0.0;
};
using Classification = std::variant<WellPosed, IllPosed>;

// Samples on the lattice j * step <= kmax, so a larger kmax only adds samples.
inline constexpr double kClassifyStep = 15.0 / 200.0;
Classification classify_boussinesq(const BoussinesqCoefficients& c, const PhysicalParams& params,
                                   double kmax, double step = kClassifyStep);
bool well_posed(const BoussinesqCoefficients& c, const PhysicalParams& params, double kmax);

inline constexpr double kIllPosedPenalty = 1e9;

struct ObjectiveValue {
    double value = 0.0;    // sum of squared branch errors, plus the penalty if ill-posed
    double prefix = 0.0;   // sum restricted to the samples before the first ill-posed one
    std::optional<double> first_bad_k;
};

// Squared frequency mismatch against full_dispersion on k_j = kmax j / samples.
ObjectiveValue dispersion_objective(const BoussinesqCoefficients& c, const PhysicalParams& params,
                                    double kmax, int samples = 200);

struct OptimizerOptions {
    double kmax = 15.0;
    int samples = 200;
    int restarts = 8;
    std::uint64_t seed = 20080101;
    int max_iterations = 4000;
    double tolerance = 1e-10;
    int jobs = 1;
};

struct OptimizationResult {
    BoussinesqCoefficients coeffs;
    double objective = 0.0;
    int evaluations = 0;
    int restarts = 0;
};

// Restarted Nelder-Mead search over [-1.5, 1] x [-1.5, 0] x [-1.5, 0] for (a1, a2, b1).
// Throws OptimizationFailed if no restart reaches a well-posed point.
OptimizationResult optimize_coefficients(const PhysicalParams& params,
                                         const OptimizerOptions& options = {});

}  // namespace stratwave
