#include "stratwave/dispersion.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <thread>
#include <tuple>

#include "stratwave/errors.hpp"

namespace stratwave {

namespace {

void require_positive_k(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("wavenumber must be positive and finite");
}

// Roots of x^2 - p x + q = 0. A discriminant that is negative only at
// rounding level is a double root.
std::optional<std::pair<double, double>> quadratic_roots(double p, double q) {
    double disc = p * p - 4.0 * q;
    if (disc < 0.0) {
        if (disc < -1e-12 * p * p) return std::nullopt;
        disc = 0.0;
    }
    const double big = 0.5 * (p + std::copysign(std::sqrt(disc), p));
    if (big == 0.0) return std::make_pair(0.0, 0.0);
    const double small = q / big;
    return std::make_pair(std::min(small, big), std::max(small, big));
}

}  // namespace

Frequencies full_dispersion(double k, const PhysicalParams& p) {
    require_positive_k(k);
    const double s = std::sqrt(p.mu());
    const double g = p.gamma();
    const double t1 = std::tanh(s * k);
    const double t2 = std::tanh(s * k / p.delta());
    const double den = 1.0 + g * t1 * t2;
    const double sum = k / s * (t1 + t2) / den;
    const double prod = k * k / p.mu() * (1.0 - g) * t1 * t2 / den;
    if (!(prod > 0.0))
        throw NoRealRoots("nonpositive root omega^2 at k=" + std::to_string(k) +
                          " (gamma=" + std::to_string(g) + ")");
    // sum^2 - 4 prod written without cancellation; nonnegative when gamma < 1.
    const double d = (t1 - t2) * (t1 - t2) + 4.0 * t1 * t2 * g * (1.0 - (1.0 - g) * t1 * t2);
    const double plus2 = 0.5 * (sum + k / s * std::sqrt(std::max(d, 0.0)) / den);
    const double minus2 = prod / plus2;
    return {std::sqrt(minus2), std::sqrt(plus2)};
}

Frequencies sw_dispersion(double k, const PhysicalParams& p) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("wavenumber must be nonnegative");
    const double d = p.delta();
    const double g = p.gamma();
    const double plus2 = (1.0 + d + std::sqrt((1.0 - d) * (1.0 - d) + 4.0 * g * d)) / (2.0 * d);
    const double minus2 = (1.0 - g) / d / plus2;
    return {k * std::sqrt(std::max(minus2, 0.0)), k * std::sqrt(plus2)};
}

QuadraticSymbols boussinesq_symbols(double y, const PhysicalParams& p,
                                    const BoussinesqCoefficients& c) {
    const double d = p.delta();
    const double g = p.gamma();
    const double al1 = c.alpha1(d);
    const double al2 = c.alpha2(d);
    const double be1 = c.beta1();
    const double den = (1.0 - c.b1 * y) * (1.0 - (c.a2 - g * d) / (d * d) * y) +
                       g / (2.0 * d) * c.a1 * y * y;
    const double num_a = (1.0 - be1 * y) * (1.0 + (g * d * (c.a1 + 1.0) - c.a2) / (d * d) * y) +
                         g * (1.0 / d - (al1 + al2) * y) * (1.0 - (c.b1 + 0.5) * y) +
                         (1.0 - g) * (1.0 / d - al2 * y) * (1.0 - c.b1 * y);
    const double num_b = (1.0 - g) * (1.0 / d - al2 * y) * (1.0 - be1 * y);
    return {num_a / den, num_b / den};
}

BoussinesqRoots boussinesq_dispersion(double k, const PhysicalParams& p,
                                      const BoussinesqCoefficients& c) {
    require_positive_k(k);
    const QuadraticSymbols s = boussinesq_symbols(p.mu() * k * k, p, c);
    if (!std::isfinite(s.a) || !std::isfinite(s.b)) return IllPosedAt{k};
    const auto r = quadratic_roots(s.a, s.b);
    if (!r || !(r->first > 0.0)) return IllPosedAt{k};
    return Frequencies{k * std::sqrt(r->first), k * std::sqrt(r->second)};
}

Classification classify_boussinesq(const BoussinesqCoefficients& c, const PhysicalParams& p,
                                   double kmax, double step) {
    if (!(kmax > 0.0)) throw InvalidArgument("kmax must be positive");
    if (!(step > 0.0)) throw InvalidArgument("sampling step must be positive");
    const long n = static_cast<long>(std::floor(kmax / step * (1.0 + 1e-14)));
    if (n == 0) {
        const BoussinesqRoots r = boussinesq_dispersion(kmax, p, c);
        if (const auto* bad = std::get_if<IllPosedAt>(&r)) return IllPosed{bad->k};
        return WellPosed{};
    }
    for (long j = 1; j <= n; ++j) {
        const double k = static_cast<double>(j) * step;
        if (std::holds_alternative<IllPosedAt>(boussinesq_dispersion(k, p, c))) return IllPosed{k};
    }
    return WellPosed{};
}

bool well_posed(const BoussinesqCoefficients& c, const PhysicalParams& p, double kmax) {
    return std::holds_alternative<WellPosed>(classify_boussinesq(c, p, kmax));
}

ObjectiveValue dispersion_objective(const BoussinesqCoefficients& c, const PhysicalParams& p,
                                    double kmax, int samples) {
    if (!(kmax > 0.0) || samples < 1) throw InvalidArgument("invalid objective sampling");
    ObjectiveValue out;
    for (int j = 1; j <= samples; ++j) {
        const double k = kmax * j / samples;
        const BoussinesqRoots r = boussinesq_dispersion(k, p, c);
        if (const auto* bad = std::get_if<IllPosedAt>(&r)) {
            out.first_bad_k = bad->k;
            break;
        }
        const auto& w = std::get<Frequencies>(r);
        const Frequencies f = full_dispersion(k, p);
        out.prefix += (w.plus - f.plus) * (w.plus - f.plus) + (w.minus - f.minus) * (w.minus - f.minus);
    }
    out.value = out.first_bad_k ? kIllPosedPenalty + out.prefix : out.prefix;
    return out;
}

namespace {

constexpr std::array<double, 3> kLower{-1.5, -1.5, -1.5};
constexpr std::array<double, 3> kUpper{1.0, 0.0, 0.0};

struct SearchContext {
    const PhysicalParams* params;
    double kmax;
    int samples;
    int evaluations = 0;
};

double search_objective(const gsl_vector* x, void* data) {
    auto* ctx = static_cast<SearchContext*>(data);
    ++ctx->evaluations;
    double outside = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double v = gsl_vector_get(x, i);
        outside += std::max(0.0, kLower[i] - v) + std::max(0.0, v - kUpper[i]);
    }
    if (outside > 0.0) return kIllPosedPenalty * (1.0 + outside);
    const BoussinesqCoefficients c{gsl_vector_get(x, 0), gsl_vector_get(x, 1), gsl_vector_get(x, 2)};
    return dispersion_objective(c, *ctx->params, ctx->kmax, ctx->samples).value;
}

struct RestartResult {
    BoussinesqCoefficients coeffs;
    double value = kIllPosedPenalty;
    int evaluations = 0;
};

RestartResult run_restart(const std::array<double, 3>& start, const PhysicalParams& p,
                          const OptimizerOptions& o) {
    SearchContext ctx{&p, o.kmax, o.samples};
    gsl_multimin_function f{&search_objective, 3, &ctx};
    gsl_vector* x = gsl_vector_alloc(3);
    gsl_vector* step = gsl_vector_alloc(3);
    for (std::size_t i = 0; i < 3; ++i) {
        gsl_vector_set(x, i, start[i]);
        gsl_vector_set(step, i, 0.1 * (kUpper[i] - kLower[i]));
    }
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
    gsl_multimin_fminimizer_set(m, &f, x, step);
    for (int it = 0; it < o.max_iterations; ++it) {
        if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), o.tolerance) == GSL_SUCCESS) break;
    }
    const gsl_vector* best = gsl_multimin_fminimizer_x(m);
    RestartResult r;
    r.coeffs = {gsl_vector_get(best, 0), gsl_vector_get(best, 1), gsl_vector_get(best, 2)};
    r.value = gsl_multimin_fminimizer_minimum(m);
    r.evaluations = ctx.evaluations;
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return r;
}

// Cell centers of a 2 x 2 x 2 lattice over the box, cycled for more restarts,
// each jittered within its cell.
std::vector<std::array<double, 3>> start_points(const OptimizerOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    std::vector<std::array<double, 3>> out;
    for (int r = 0; r < o.restarts; ++r) {
        const int cell = r % 8;
        std::array<double, 3> s{};
        for (std::size_t i = 0; i < 3; ++i) {
            const double w = 0.5 * (kUpper[i] - kLower[i]);
            const int bit = (cell >> i) & 1;
            s[i] = kLower[i] + w * (bit + 0.5 + jitter(rng));
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

OptimizationResult optimize_coefficients(const PhysicalParams& p, const OptimizerOptions& o) {
    if (o.restarts < 1) throw InvalidArgument("at least one restart is required");
    if (!(o.kmax > 0.0) || o.samples < 1) throw InvalidArgument("invalid objective sampling");
    gsl_set_error_handler_off();
    const auto starts = start_points(o);
    std::vector<RestartResult> results(starts.size());
    const int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(starts.size())));
    auto worker = [&](int t) {
        for (std::size_t i = static_cast<std::size_t>(t); i < starts.size(); i += static_cast<std::size_t>(jobs))
            results[i] = run_restart(starts[i], p, o);
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    OptimizationResult out;
    out.restarts = static_cast<int>(results.size());
    const RestartResult* best = nullptr;
    for (const auto& r : results) {
        out.evaluations += r.evaluations;
        if (r.value >= kIllPosedPenalty) continue;
        const auto key = [](const RestartResult& x) {
            return std::make_tuple(x.value, x.coeffs.a1, x.coeffs.a2, x.coeffs.b1);
        };
        if (!best || key(r) < key(*best)) best = &r;
    }
    if (!best) throw OptimizationFailed("no restart reached a well-posed coefficient set");
    out.coeffs = best->coeffs;
    out.objective = best->value;
    return out;
}

}  // namespace stratwave
