#include "stratwave/consistency.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "stratwave/errors.hpp"
#include "stratwave/spectral.hpp"
#include "terms.hpp"

namespace stratwave {

namespace {

void require_line(const SurfaceState& s, const char* what) {
    if (s.grid().dim != 1) throw Unsupported(std::string(what) + " is implemented for d = 1 only");
}

void require_alpha(const PhysicalParams& p) {
    if (!(p.alpha() > 0.0)) throw DegenerateAlpha("alpha = 0: the full free-surface system is singular");
}

std::vector<double> flatten(std::initializer_list<const ScalarField*> fields) {
    std::vector<double> out;
    for (const ScalarField* f : fields) out.insert(out.end(), f->values().begin(), f->values().end());
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Derivative at 0 of f: centered differences at tau and tau/2, Richardson-extrapolated.
template <class F>
std::vector<double> richardson_derivative(F&& f, double tau) {
    auto centered = [&](double t) {
        std::vector<double> p = f(t);
        const std::vector<double> m = f(-t);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = (p[i] - m[i]) / (2.0 * t);
        return p;
    };
    std::vector<double> coarse = centered(tau);
    for (int k = 0; k <= kMaxStepHalvings; ++k) {
        tau *= 0.5;
        std::vector<double> fine = centered(tau);
        std::vector<double> extrapolated(fine.size());
        double err = 0.0;
        for (std::size_t i = 0; i < fine.size(); ++i) {
            const double d = (fine[i] - coarse[i]) / 3.0;
            extrapolated[i] = fine[i] + d;
            err = std::max(err, std::abs(d));
        }
        if (err <= 0.01 * max_abs(extrapolated)) return extrapolated;
        coarse = std::move(fine);
    }
    std::ostringstream msg;
    msg << "Richardson estimate above 1% down to tau=" << tau;
    throw StepTooLarge(msg.str());
}

ScalarField slice(const GridSpec& g, const std::vector<double>& v, std::size_t block) {
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    return ScalarField(g, std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(block) * n,
                                              v.begin() + static_cast<std::ptrdiff_t>(block + 1) * n));
}

double initial_step(const SurfaceState& s, const SurfaceTangent& t) {
    const double scale = std::max({1.0, s.zeta1().max_abs(), s.zeta2().max_abs(),
                                   s.gradpsi1().max_abs(), s.gradpsi2().max_abs()});
    const double rate = t.max_abs();
    return rate > 0.0 ? 1e-2 * scale / rate : 1e-2;
}

}  // namespace

std::pair<ScalarField, ScalarField> full_nonlinear(const SurfaceState& s, const NumericOperators& ops,
                                                   const PhysicalParams& p) {
    const double mu = p.mu();
    const VectorField gz1 = p.eps1() * grad(s.zeta1());
    const VectorField gz2 = p.eps2() * grad(s.zeta2());
    const ScalarField w1 = (1.0 / mu) * ops.g1 + dot(gz1, s.gradpsi1());
    const ScalarField w2 = (1.0 / mu) * ops.g2 + dot(gz2, s.gradpsi2());
    const ScalarField w3 = (1.0 / mu) * ops.g2 + dot(gz2, ops.h);
    const ScalarField d1 = 2.0 * (1.0 + mu * norm_squared(gz1));
    const ScalarField d2 = 2.0 * (1.0 + mu * norm_squared(gz2));
    return {w1 * w1 / d1, (w2 * w2 - p.gamma() * (w3 * w3)) / d2};
}

SurfaceTangent full_system_tangent(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                                   int nz) {
    require_line(s, "full_system_tangent");
    require_alpha(p);
    require_same_grid(s.grid(), b.grid(), "full_system_tangent");
    const GridSpec& grid = s.grid();
    const double mu = p.mu();
    const double a = p.alpha();
    const double g = p.gamma();
    const double e2 = p.eps2();

    const TwoLayerStrips strips(s.zeta1(), s.zeta2(), b, p, nz, s.h_min());
    const ScalarField psi1 = s.psi1();
    const ScalarField psi2 = s.psi2();
    const NumericOperators ops = strips.apply(psi1, psi2);
    const auto [n1, n2] = full_nonlinear(s, ops, p);

    ScalarField dz1 = (1.0 / (a * mu)) * ops.g1;
    ScalarField dz2 = (1.0 / mu) * ops.g2;
    const ScalarField s1 =
        -a * s.zeta1() - 0.5 * e2 * norm_squared(s.gradpsi1()) + mu * e2 * n1;
    const ScalarField s2 = -(1.0 - g) * s.zeta2() -
                           0.5 * e2 * (norm_squared(s.gradpsi2()) - g * norm_squared(ops.h)) +
                           mu * e2 * n2;

    // Interface trace of the upper potential as the shapes move at fixed potentials.
    ScalarField shape_rate(grid);
    const double rate = std::max(dz1.max_abs(), dz2.max_abs());
    if (rate > 0.0) {
        const double scale = std::max({1.0, s.zeta1().max_abs(), s.zeta2().max_abs()});
        shape_rate = detail::four_point_derivative(
            [&](double e) {
                ScalarField z1 = s.zeta1();
                ScalarField z2 = s.zeta2();
                z1.axpy(e, dz1);
                z2.axpy(e, dz2);
                return TwoLayerStrips(z1, z2, b, p, nz, s.h_min()).apply(psi1, psi2).interface_trace;
            },
            1e-3 * scale / rate);
    }

    const ScalarField zero(grid);
    const ScalarField rhs = s2 + g * (shape_rate + strips.apply(s1, zero).interface_trace);

    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        ScalarField unit(grid);
        unit[static_cast<std::size_t>(j)] = 1.0;
        const ScalarField col = strips.apply(zero, unit).interface_trace;
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) -= g * col[static_cast<std::size_t>(i)];
    }
    const Eigen::Map<const Eigen::VectorXd> r(rhs.data(), n);
    const Eigen::VectorXd x = m.partialPivLu().solve(r);
    const ScalarField dpsi2(grid, std::vector<double>(x.data(), x.data() + n));

    return {std::move(dz1), std::move(dz2), grad(s1), grad(dpsi2)};
}

OperatorRates operator_time_derivative(const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                                       double tau, int nz) {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
    const SurfaceTangent t = full_system_tangent(s, b, p, nz);
    const std::vector<double> d = richardson_derivative(
        [&](double e) {
            const NumericOperators ops = numeric_operators(advance(s, e, t), b, p, nz);
            return flatten({&ops.g1, &ops.g2, &ops.h[0]});
        },
        tau);
    const GridSpec& g = s.grid();
    return {slice(g, d, 0), slice(g, d, 1), VectorField(std::vector<ScalarField>{slice(g, d, 2)})};
}

std::pair<VectorField, VectorField> numeric_layer_means(const SurfaceState& s, const ScalarField& b,
                                                        const PhysicalParams& p, int nz) {
    require_line(s, "numeric_layer_means");
    const NumericOperators ops = numeric_operators(s, b, p, nz);
    return {mean_velocity(ops.upper), mean_velocity(ops.lower)};
}

// ---------------------------------------------------------------------------

std::string model_name(Model m) {
    switch (m) {
        case Model::Swsw: return "swsw";
        case Model::Bouss: return "bouss";
        case Model::Ho: return "ho";
        case Model::SwswLm: return "swsw-lm";
        case Model::BoussLm: return "bouss-lm";
        case Model::HoLm: return "ho-lm";
    }
    return "?";
}

Model parse_model(const std::string& name) {
    for (Model m : {Model::Swsw, Model::Bouss, Model::Ho, Model::SwswLm, Model::BoussLm, Model::HoLm})
        if (model_name(m) == name) return m;
    throw InvalidArgument("unknown model '" + name + "'");
}

std::array<std::string, 4> equation_names(Model m) {
    switch (m) {
        case Model::Swsw:
        case Model::Ho: return {"zeta1", "zeta2", "gradpsi1", "gradpsi2"};
        case Model::Bouss: return {"zeta1", "zeta2", "u1", "u2"};
        default: return {"h1", "h2", "u1bar", "u2bar"};
    }
}

double Residual::total() const {
    double acc = 0.0;
    for (double r : norms) acc += r * r;
    return std::sqrt(acc);
}

namespace {

Residual norms_of(const ScalarField& r1, const ScalarField& r2, const VectorField& r3, const VectorField& r4) {
    const double s = kResidualSobolevIndex;
    return {{sobolev_norm(r1, s), sobolev_norm(r2, s), sobolev_norm(r3, s), sobolev_norm(r4, s)}};
}

Residual layer_mean_residual(Model m, const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                             int nz, const SurfaceTangent& full) {
    auto [u1, u2] = numeric_layer_means(s, b, p, nz);
    const LayerMeanState lm = layer_mean_state(s, b, p, std::move(u1), std::move(u2));

    const std::vector<double> du = richardson_derivative(
        [&](double e) {
            const auto [a1, a2] = numeric_layer_means(advance(s, e, full), b, p, nz);
            return flatten({&a1[0], &a2[0]});
        },
        initial_step(s, full));
    const GridSpec& g = s.grid();
    LayerMeanTangent rate{p.eps1() * full.dzeta1 - p.eps2() * full.dzeta2, p.eps2() * full.dzeta2,
                          VectorField(std::vector<ScalarField>{slice(g, du, 0)}),
                          VectorField(std::vector<ScalarField>{slice(g, du, 1)})};

    switch (m) {
        case Model::SwswLm: {
            const LayerMeanTangent r = layer_mean_rhs(LayerMeanVariant::SwswLm, lm, b, p);
            return norms_of(rate.dh1 - r.dh1, rate.dh2 - r.dh2, rate.du1 - r.du1, rate.du2 - r.du2);
        }
        case Model::BoussLm: {
            // M d_t u = F, F the hydrostatic right side
            const LayerMeanTangent f = layer_mean_rhs(LayerMeanVariant::SwswLm, lm, b, p);
            if (p.beta() != 0.0 && b.max_abs() != 0.0)
                throw Unsupported("the layer-mean Boussinesq system requires a flat bottom (beta b = 0)");
            const auto [m1, m2] =
                boussinesq_time_operator(rate.du1, rate.du2, p, BoussinesqCoefficients::layer_mean());
            return norms_of(rate.dh1 - f.dh1, rate.dh2 - f.dh2, m1 - f.du1, m2 - f.du2);
        }
        default: {
            const LayerMeanHigherOrderTerms t = ho_layer_mean_terms(lm, b, p);
            const auto [c1, c2] = t.coupling(rate);
            return norms_of(rate.dh1 - t.spatial.dh1, rate.dh2 - t.spatial.dh2,
                            rate.du1 - t.spatial.du1 - c1, rate.du2 - t.spatial.du2 - c2);
        }
    }
}

}  // namespace

Residual residual(const ModelSpec& model, const SurfaceState& s, const ScalarField& b, const PhysicalParams& p,
                  int nz) {
    require_line(s, "residual");
    const SurfaceTangent full = full_system_tangent(s, b, p, nz);
    const double a = p.alpha();
    switch (model.kind) {
        case Model::Swsw: {
            const SurfaceTangent m = swsw_rhs(s, b, p);
            return norms_of(a * (full.dzeta1 - m.dzeta1), full.dzeta2 - m.dzeta2,
                            full.dgradpsi1 - m.dgradpsi1, full.dgradpsi2 - m.dgradpsi2);
        }
        case Model::Bouss: {
            const BoussinesqCoefficients& c = model.coeffs;
            auto [u1, u2] = boussinesq_velocities(s.gradpsi1(), s.gradpsi2(), p, c);
            const SurfaceState su(s.zeta1(), s.zeta2(), std::move(u1), std::move(u2), s.h_min());
            const SurfaceTangent f = boussinesq_forcing(su, b, p, c);
            const auto [du1, du2] = boussinesq_velocities(full.dgradpsi1, full.dgradpsi2, p, c);
            const auto [m1, m2] = boussinesq_time_operator(du1, du2, p, c);
            return norms_of(a * (full.dzeta1 - f.dzeta1), full.dzeta2 - f.dzeta2, m1 - f.dgradpsi1,
                            m2 - f.dgradpsi2);
        }
        case Model::Ho: {
            const HigherOrderTerms t = ho_rhs(s, b, p);
            return norms_of(a * (full.dzeta1 - t.spatial.dzeta1), full.dzeta2 - t.spatial.dzeta2,
                            full.dgradpsi1 - t.spatial.dgradpsi1,
                            full.dgradpsi2 - t.spatial.dgradpsi2 - t.coupling(full));
        }
        default:
            return layer_mean_residual(model.kind, s, b, p, nz, full);
    }
}

// ---------------------------------------------------------------------------

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidArgument("loglog_slope: size mismatch");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

SweepResult rate_sweep(const ModelSpec& model, const StateFamily& states, const ScalarField& b,
                       const ParamsFamily& params, const std::vector<double>& mus,
                       const SweepOptions& options) {
    if (mus.size() < 4) throw InvalidArgument("rate_sweep needs at least four values of mu");
    const auto [lo, hi] = std::minmax_element(mus.begin(), mus.end());
    if (!(*lo > 0.0)) throw InvalidArgument("mu values must be positive");
    if (std::log10(*hi / *lo) < 1.5 - 1e-12)
        throw InvalidArgument("mu values must span at least 1.5 decades");
    if (options.nz_coarse >= options.nz || options.nz_coarse < 4)
        throw InvalidArgument("nz_coarse must lie in [4, nz)");

    SweepResult out;
    out.points.resize(mus.size());
    std::vector<std::string> errors(mus.size());
    std::vector<std::string> error_names(mus.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < mus.size(); i = next++) {
            try {
                const PhysicalParams p = params(mus[i]);
                const SurfaceState s = states(mus[i]);
                SweepPoint& pt = out.points[i];
                pt.mu = mus[i];
                pt.residual = residual(model, s, b, p, options.nz);
                const Residual coarse = residual(model, s, b, p, options.nz_coarse);
                pt.noise = std::abs(pt.residual.total() - coarse.total());
                pt.below_noise_floor = pt.residual.total() < 10.0 * pt.noise;
            } catch (const Error& e) {
                errors[i] = e.what();
                error_names[i] = e.name();
            } catch (const std::exception& e) {
                errors[i] = e.what();
                error_names[i] = "SolverDivergence";
            }
        }
    };
    const int jobs = std::clamp(options.jobs, 1, static_cast<int>(mus.size()));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < mus.size(); ++i)
        if (!errors[i].empty()) {
            std::ostringstream msg;
            msg << "rate_sweep at mu=" << mus[i] << ": " << errors[i];
            throw Error(error_names[i], msg.str());
        }

    std::vector<double> x, y;
    for (const auto& pt : out.points) {
        x.push_back(pt.mu);
        y.push_back(pt.residual.total());
        out.below_noise_floor = out.below_noise_floor || pt.below_noise_floor;
    }
    out.slope = loglog_slope(x, y);
    for (std::size_t e = 0; e < 4; ++e) {
        std::vector<double> ye;
        for (const auto& pt : out.points) ye.push_back(pt.residual.norms[e]);
        out.slopes[e] = loglog_slope(x, ye);
    }
    return out;
}

// ---------------------------------------------------------------------------

GridSpec family_grid(int nx) { return GridSpec::line(nx, 2.0 * std::numbers::pi); }

PhysicalParams family_params(Regime regime, double mu) {
    switch (regime) {
        case Regime::Weakly: return PhysicalParams(kFamilyGamma, kFamilyDelta, mu, mu, mu, 0.0);
        case Regime::ShallowWater:
        case Regime::HigherOrder: break;
    }
    return PhysicalParams(kFamilyGamma, kFamilyDelta, mu, 0.5, 0.5, 0.5);
}

SurfaceState family_state(const GridSpec& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double kx = 2.0 * std::numbers::pi / grid.lx;
    std::array<double, 4> th{};
    for (double& t : th) t = phase(rng);
    auto z1 = ScalarField::from_function(grid, [&](double x, double) { return 0.4 * std::cos(kx * x); });
    auto z2 = ScalarField::from_function(grid, [&](double x, double) { return 0.6 * std::cos(kx * x + 0.7); });
    auto p1 = ScalarField::from_function(grid, [&](double x, double) {
        return 0.5 * std::cos(kx * x + th[0]) + 0.25 * std::cos(2.0 * kx * x + th[1]);
    });
    auto p2 = ScalarField::from_function(grid, [&](double x, double) {
        return 0.5 * std::cos(kx * x + th[2]) + 0.25 * std::cos(2.0 * kx * x + th[3]);
    });
    return SurfaceState::from_potentials(z1, z2, p1, p2);
}

ScalarField family_bottom(const GridSpec& grid, Regime regime) {
    if (regime == Regime::Weakly) return ScalarField(grid);
    const double kx = 2.0 * std::numbers::pi / grid.lx;
    return ScalarField::from_function(grid, [&](double x, double) { return 0.5 * std::cos(kx * x - 0.3); });
}

Regime model_regime(Model m) {
    switch (m) {
        case Model::Swsw:
        case Model::SwswLm: return Regime::ShallowWater;
        case Model::Bouss:
        case Model::BoussLm: return Regime::Weakly;
        case Model::Ho:
        case Model::HoLm: return Regime::HigherOrder;
    }
    return Regime::ShallowWater;
}

std::vector<double> default_mus() { return {2.5e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2}; }

}  // namespace stratwave
