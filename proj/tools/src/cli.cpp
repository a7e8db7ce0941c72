#include "stratwave/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "stratwave/cli/output.hpp"
#include "stratwave/consistency.hpp"
#include "stratwave/dispersion.hpp"
#include "stratwave/dtn.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"
#include "stratwave/spectral.hpp"
#include "stratwave/version.hpp"

namespace stratwave::cli {

namespace {

using Json = nlohmann::ordered_json;

// Bad flag values detected after parsing.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParamOptions {
    double gamma = 0.8;
    double delta = 0.5;
    double mu = 0.1;
    double eps1 = 0.1;
    double eps2 = 0.1;
    double beta = 0.0;
    std::optional<double> alpha;
};

void add_params(CLI::App* app, ParamOptions& o) {
    app->add_option("--gamma", o.gamma, "density ratio rho1/rho2")->capture_default_str();
    app->add_option("--delta", o.delta, "upper over lower depth")->capture_default_str();
    app->add_option("--mu", o.mu, "shallowness parameter")->capture_default_str();
    app->add_option("--eps1", o.eps1, "surface amplitude parameter")->capture_default_str();
    app->add_option("--eps2", o.eps2, "interface amplitude parameter")->capture_default_str();
    app->add_option("--beta", o.beta, "bottom amplitude parameter")->capture_default_str();
    app->add_option("--alpha", o.alpha, "eps1/eps2 when eps2 = 0");
}

PhysicalParams make_params(const ParamOptions& o) {
    PhysicalParams::Options opts;
    opts.alpha = o.alpha;
    return PhysicalParams(o.gamma, o.delta, o.mu, o.eps1, o.eps2, o.beta, opts);
}

Json params_json(const PhysicalParams& p) {
    Json j;
    j["gamma"] = p.gamma();
    j["delta"] = p.delta();
    j["mu"] = p.mu();
    j["eps1"] = p.eps1();
    j["eps2"] = p.eps2();
    j["beta"] = p.beta();
    j["alpha"] = p.alpha();
    return j;
}

Json grid_json(const GridSpec& g) {
    Json j;
    j["dim"] = g.dim;
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    j["lx"] = g.lx;
    j["ly"] = g.ly;
    return j;
}

Json regime_json(Regime r) {
    const PhysicalParams p = family_params(r, 1.0);
    Json j;
    j["name"] = r == Regime::Weakly ? "weakly-nonlinear" : r == Regime::HigherOrder ? "higher-order" : "shallow-water";
    j["gamma"] = p.gamma();
    j["delta"] = p.delta();
    if (r == Regime::Weakly)
        j["eps"] = "mu";
    else
        j["eps"] = p.eps1();
    j["beta"] = p.beta();
    return j;
}

Json coeffs_json(const BoussinesqCoefficients& c) { return Json{{"a1", c.a1}, {"a2", c.a2}, {"b1", c.b1}}; }

BoussinesqCoefficients coeffs_from(const std::vector<double>& v) {
    if (v.size() != 3) throw ConfigError("--coeffs expects three values a1,a2,b1");
    return {v[0], v[1], v[2]};
}

int default_jobs() {
    if (const char* env = std::getenv("STRATWAVE_JOBS")) {
        try {
            const int j = std::stoi(env);
            if (j >= 1) return j;
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("STRATWAVE_JOBS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

struct Common {
    std::string out;
    std::string manifest;
    int jobs = 0;
};

void add_common(CLI::App* app, Common& c, const std::string& name) {
    c.out = name + ".csv";
    app->add_option("--out,-o", c.out, "CSV output path")->capture_default_str();
    app->add_option("--manifest", c.manifest, "JSON manifest path (default: CSV path with .json)");
}

void add_jobs(CLI::App* app, Common& c) {
    app->add_option("--jobs,-j", c.jobs, "worker threads (default: STRATWAVE_JOBS or 1)");
}

int resolve_jobs(const Common& c) {
    if (c.jobs == 0) return default_jobs();
    if (c.jobs < 0) throw ConfigError("--jobs must be positive");
    return c.jobs;
}

void finish(const Csv& csv, RunRecord& r, const Common& c) {
    write_outputs(csv, r, c.out, c.manifest.empty() ? default_manifest_path(c.out) : c.manifest);
}

// Runs body(i) for i in [0, n) on up to jobs threads; the first failure is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& body) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::min<int>(jobs, static_cast<int>(n)); ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------

struct DispersionCmd {
    Common common;
    ParamOptions params{2.0 / 3.0, 1.0 / 3.0, 0.1, 0.1, 0.1, 0.0, {}};
    double kmax = 15.0;
    int samples = 200;
    std::vector<double> coeffs;

    void add(CLI::App& app) {
        auto* sub = app.add_subcommand("dispersion", "full, shallow-water and Boussinesq dispersion curves");
        add_common(sub, common, "dispersion");
        add_params(sub, params);
        sub->add_option("--kmax", kmax, "largest wavenumber")->capture_default_str();
        sub->add_option("--samples", samples, "number of wavenumbers in (0, kmax]")->capture_default_str();
        sub->add_option("--coeffs", coeffs, "Boussinesq coefficients a1,a2,b1")->delimiter(',')->expected(3);
    }

    void run() {
        if (!(kmax > 0.0)) throw ConfigError("--kmax must be positive");
        if (samples < 1) throw ConfigError("--samples must be at least 1");
        const PhysicalParams p = make_params(params);
        std::optional<BoussinesqCoefficients> c;
        if (!coeffs.empty()) c = coeffs_from(coeffs);

        std::vector<std::string> header{"k", "omega_minus_full", "omega_plus_full", "omega_minus_sw",
                                        "omega_plus_sw"};
        if (c) {
            header.push_back("omega_minus_bouss");
            header.push_back("omega_plus_bouss");
        }
        Csv csv(header);
        std::optional<double> first_bad;
        for (int j = 1; j <= samples; ++j) {
            const double k = kmax * j / samples;
            const Frequencies f = full_dispersion(k, p);
            const Frequencies s = sw_dispersion(k, p);
            csv.cell(k).cell(f.minus).cell(f.plus).cell(s.minus).cell(s.plus);
            if (c) {
                const BoussinesqRoots r = boussinesq_dispersion(k, p, *c);
                if (const auto* w = std::get_if<Frequencies>(&r); w && !first_bad) {
                    csv.cell(w->minus).cell(w->plus);
                } else {
                    if (!first_bad) first_bad = k;
                    csv.empty().empty();
                }
            }
            csv.end_row();
        }
        RunRecord rec{"dispersion", params_json(p), {}, nullptr, {}};
        rec.params["kmax"] = kmax;
        rec.params["samples"] = samples;
        if (c) {
            rec.params["coeffs"] = coeffs_json(*c);
            rec.results["well_posed_on_grid"] = !first_bad.has_value();
            rec.results["first_bad_k"] = first_bad ? Json(*first_bad) : Json(nullptr);
            const Classification cl = classify_boussinesq(*c, p, kmax);
            rec.results["classification"] = std::holds_alternative<WellPosed>(cl) ? "well-posed" : "ill-posed";
        }
        finish(csv, rec, common);
    }
};

// ---------------------------------------------------------------------------

struct OptimizeCmd {
    Common common;
    ParamOptions params{2.0 / 3.0, 1.0 / 3.0, 0.1, 0.1, 0.1, 0.0, {}};
    OptimizerOptions opt;

    void add(CLI::App& app) {
        auto* sub = app.add_subcommand("optimize-coeffs", "search Boussinesq coefficients minimizing dispersion error");
        add_common(sub, common, "optimize-coeffs");
        add_jobs(sub, common);
        add_params(sub, params);
        sub->add_option("--kmax", opt.kmax)->capture_default_str();
        sub->add_option("--samples", opt.samples)->capture_default_str();
        sub->add_option("--restarts", opt.restarts)->capture_default_str();
        sub->add_option("--seed", opt.seed)->capture_default_str();
        sub->add_option("--max-iterations", opt.max_iterations)->capture_default_str();
        sub->add_option("--tolerance", opt.tolerance)->capture_default_str();
    }

    void run() {
        if (!(opt.kmax > 0.0) || opt.samples < 1 || opt.restarts < 1 || opt.max_iterations < 1 ||
            !(opt.tolerance > 0.0))
            throw ConfigError("optimizer settings must be positive");
        const PhysicalParams p = make_params(params);
        opt.jobs = resolve_jobs(common);
        const OptimizationResult best = optimize_coefficients(p, opt);

        const std::vector<std::pair<std::string, BoussinesqCoefficients>> sets{
            {"optimized", best.coeffs},
            {"original", BoussinesqCoefficients::original()},
            {"layer_mean", BoussinesqCoefficients::layer_mean()},
            {"reference", {0.4714, -0.3942, -1.0}},
        };
        Csv csv({"set", "a1", "a2", "b1", "objective", "objective_prefix", "well_posed", "first_bad_k"});
        for (const auto& [name, c] : sets) {
            const ObjectiveValue v = dispersion_objective(c, p, opt.kmax, opt.samples);
            const bool wp = well_posed(c, p, opt.kmax);
            csv.cell(name).cell(c.a1).cell(c.a2).cell(c.b1).cell(v.value).cell(v.prefix);
            csv.cell(std::string(wp ? "true" : "false"));
            if (v.first_bad_k)
                csv.cell(*v.first_bad_k);
            else
                csv.empty();
            csv.end_row();
        }
        RunRecord rec{"optimize-coeffs", params_json(p), {}, opt.seed, {}};
        rec.params["kmax"] = opt.kmax;
        rec.params["samples"] = opt.samples;
        rec.params["restarts"] = opt.restarts;
        rec.params["max_iterations"] = opt.max_iterations;
        rec.params["tolerance"] = opt.tolerance;
        rec.params["jobs"] = opt.jobs;
        rec.results["coeffs"] = coeffs_json(best.coeffs);
        rec.results["objective"] = best.objective;
        rec.results["evaluations"] = best.evaluations;
        finish(csv, rec, common);
    }
};

// ---------------------------------------------------------------------------

const std::map<std::string, ExpandedOperator>& operator_names() {
    static const std::map<std::string, ExpandedOperator> m{{"g1", ExpandedOperator::G1},
                                                          {"g2", ExpandedOperator::G2},
                                                          {"h", ExpandedOperator::H},
                                                          {"mean1", ExpandedOperator::Mean1},
                                                          {"mean2", ExpandedOperator::Mean2}};
    return m;
}

struct DtnConvergenceCmd {
    Common common;
    ParamOptions params{0.8, 0.5, 0.1, 0.3, 0.3, 0.3, {}};
    std::string op = "g2";
    std::vector<int> orders;
    std::vector<double> mus{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    int nx = 32;
    int nz = 32;
    std::uint64_t seed = kDefaultFamilySeed;

    void add(CLI::App& app) {
        auto* sub = app.add_subcommand("dtn-convergence", "error of the shallow-water expansions against the strip solver");
        add_common(sub, common, "dtn-convergence");
        add_jobs(sub, common);
        add_params(sub, params);
        sub->add_option("--operator", op, "g1 | g2 | h | mean1 | mean2")->capture_default_str();
        sub->add_option("--orders", orders, "expansion orders (default: both)")->delimiter(',');
        sub->add_option("--mus", mus, "values of mu")->delimiter(',');
        sub->add_option("--nx", nx)->capture_default_str();
        sub->add_option("--nz", nz)->capture_default_str();
        sub->add_option("--seed", seed, "seed of the potential phases")->capture_default_str();
    }

    void run() {
        const auto it = operator_names().find(op);
        if (it == operator_names().end()) throw ConfigError("unknown --operator '" + op + "'");
        const auto [lo, hi] = expansion_orders(it->second);
        if (orders.empty()) orders = {lo, hi};
        for (int o : orders)
            if (o != lo && o != hi) throw ConfigError("order " + std::to_string(o) + " not available for " + op);
        if (mus.size() < 2) throw ConfigError("--mus needs at least two values");
        const PhysicalParams base = make_params(params);
        for (double mu : mus) (void)base.with_mu(mu);

        const GridSpec g = family_grid(nx);
        const SurfaceState s = family_state(g, seed);
        const ScalarField b = family_bottom(g, Regime::ShallowWater);
        std::vector<std::vector<double>> err(orders.size(), std::vector<double>(mus.size()));
        parallel_for(mus.size(), resolve_jobs(common), [&](std::size_t i) {
            const PhysicalParams p = base.with_mu(mus[i]);
            for (std::size_t o = 0; o < orders.size(); ++o)
                err[o][i] = expansion_error(it->second, orders[o], s, b, p, nz);
        });

        std::vector<std::string> header{"mu"};
        for (int o : orders) header.push_back("err_order" + std::to_string(o));
        Csv csv(header);
        for (std::size_t i = 0; i < mus.size(); ++i) {
            csv.cell(mus[i]);
            for (const auto& e : err) csv.cell(e[i]);
            csv.end_row();
        }
        RunRecord rec{"dtn-convergence", params_json(base), grid_json(g), seed, {}};
        rec.params.erase("mu");
        rec.params["operator"] = op;
        rec.params["orders"] = orders;
        rec.params["mus"] = mus;
        rec.params["nz"] = nz;
        Json slopes = Json::object();
        for (std::size_t o = 0; o < orders.size(); ++o)
            slopes["order" + std::to_string(orders[o])] = loglog_slope(mus, err[o]);
        rec.results["slopes"] = slopes;
        finish(csv, rec, common);
    }
};

// ---------------------------------------------------------------------------

struct ConsistencyCmd {
    Common common;
    std::string model = "swsw";
    std::vector<double> coeffs;
    std::vector<double> mus = default_mus();
    int nx = 32;
    SweepOptions sweep;
    std::uint64_t seed = kDefaultFamilySeed;

    void add(CLI::App& app) {
        auto* sub = app.add_subcommand("consistency", "residual rate sweep of an asymptotic model");
        add_common(sub, common, "consistency");
        add_jobs(sub, common);
        sub->add_option("--model", model, "swsw | bouss | ho | swsw-lm | bouss-lm | ho-lm")->capture_default_str();
        sub->add_option("--coeffs", coeffs, "Boussinesq coefficients a1,a2,b1 (bouss)")->delimiter(',')->expected(3);
        sub->add_option("--mus", mus, "values of mu")->delimiter(',');
        sub->add_option("--nx", nx)->capture_default_str();
        sub->add_option("--nz", sweep.nz)->capture_default_str();
        sub->add_option("--nz-coarse", sweep.nz_coarse, "vertical resolution of the noise estimate")->capture_default_str();
        sub->add_option("--seed", seed, "seed of the potential phases")->capture_default_str();
    }

    void run() {
        Model m;
        try {
            m = parse_model(model);
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
        ModelSpec spec{m, {}};
        if (!coeffs.empty()) {
            if (m != Model::Bouss) throw ConfigError("--coeffs applies to --model bouss only");
            spec.coeffs = coeffs_from(coeffs);
        }
        sweep.jobs = resolve_jobs(common);
        const Regime regime = model_regime(m);
        const GridSpec g = family_grid(nx);
        const SurfaceState s = family_state(g, seed);
        const SweepResult r = rate_sweep(
            spec, [&](double) { return s; }, family_bottom(g, regime),
            [&](double mu) { return family_params(regime, mu); }, mus, sweep);

        Csv csv({"mu", "residual_eq1", "residual_eq2", "residual_eq3", "residual_eq4", "residual_total", "noise",
                 "below_noise_floor"});
        for (const auto& pt : r.points) {
            csv.cell(pt.mu);
            for (double v : pt.residual.norms) csv.cell(v);
            csv.cell(pt.residual.total()).cell(pt.noise).cell(std::string(pt.below_noise_floor ? "true" : "false"));
            csv.end_row();
        }
        RunRecord rec{"consistency", {}, grid_json(g), seed, {}};
        rec.params["model"] = model_name(m);
        if (m == Model::Bouss) rec.params["coeffs"] = coeffs_json(spec.coeffs);
        rec.params["regime"] = regime_json(regime);
        rec.params["mus"] = mus;
        rec.params["nz"] = sweep.nz;
        rec.params["nz_coarse"] = sweep.nz_coarse;
        rec.params["sobolev_index"] = kResidualSobolevIndex;
        rec.params["jobs"] = sweep.jobs;
        const auto names = equation_names(m);
        rec.results["equations"] = names;
        Json slopes = Json::object();
        for (std::size_t e = 0; e < 4; ++e) slopes[names[e]] = r.slopes[e];
        rec.results["slopes"] = slopes;
        rec.results["slope_total"] = r.slope;
        rec.results["below_noise_floor"] = r.below_noise_floor;
        finish(csv, rec, common);
    }
};

// ---------------------------------------------------------------------------

struct SimulateCmd {
    Common common;
    ParamOptions params{0.8, 0.5, 0.1, 0.1, 0.1, 0.0, {}};
    std::string system;
    std::string variant = "swsw-lm";
    std::vector<double> coeffs;
    double t_end = 1.0;
    double dt = 1e-3;
    int nx = 128;
    int ny = 0;
    double lx = 2.0 * std::numbers::pi;
    std::string init = "wave";
    double zeta1_amp = 0.1;
    double zeta2_amp = 0.2;
    double psi_amp = 0.0;
    double bottom_amp = 0.0;
    int every = 10;
    CLI::App* sub = nullptr;

    void add(CLI::App& app) {
        sub = app.add_subcommand("simulate", "time integration with conservation diagnostics");
        add_common(sub, common, "simulate");
        add_params(sub, params);
        sub->add_option("system", system, "swsw | boussinesq | rigid-lid | layer-mean")->required();
        sub->add_option("--variant", variant, "layer-mean system: swsw-lm | bouss-lm")->capture_default_str();
        sub->add_option("--coeffs", coeffs, "Boussinesq coefficients a1,a2,b1")->delimiter(',')->expected(3);
        sub->add_option("--t-end", t_end)->capture_default_str();
        sub->add_option("--dt", dt)->capture_default_str();
        sub->add_option("--nx", nx)->capture_default_str();
        sub->add_option("--ny", ny, "second dimension; 0 for a line")->capture_default_str();
        sub->add_option("--lx", lx, "period (both directions)")->capture_default_str();
        sub->add_option("--init", init, "rest | wave")->capture_default_str();
        sub->add_option("--zeta1-amp", zeta1_amp)->capture_default_str();
        sub->add_option("--zeta2-amp", zeta2_amp)->capture_default_str();
        sub->add_option("--psi-amp", psi_amp)->capture_default_str();
        sub->add_option("--bottom-amp", bottom_amp)->capture_default_str();
        sub->add_option("--every", every, "output stride in steps")->capture_default_str();
    }

    ScalarField mode(const GridSpec& g, double amp, bool sine) const {
        const double k = 2.0 * std::numbers::pi / lx;
        return ScalarField::from_function(g, [&](double x, double y) {
            const double c = sine ? std::sin(k * x) : std::cos(k * x);
            return amp * (g.dim == 2 ? c * std::cos(k * y) : c);
        });
    }

    void run() {
        if (!(dt > 0.0) || !(t_end >= 0.0)) throw ConfigError("--dt must be positive and --t-end nonnegative");
        const double nsteps_f = std::round(t_end / dt);
        if (std::abs(nsteps_f * dt - t_end) > 1e-9 * std::max(1.0, t_end))
            throw ConfigError("--t-end must be a multiple of --dt");
        if (every < 1) throw ConfigError("--every must be at least 1");
        if (init != "rest" && init != "wave") throw ConfigError("--init must be rest or wave");
        if (system == "rigid-lid" && sub->count("--eps1") == 0) params.eps1 = 0.0;
        const PhysicalParams p = make_params(params);
        const GridSpec g = ny > 0 ? GridSpec::plane(nx, ny, lx, lx) : GridSpec::line(nx, lx);
        const bool wave = init == "wave";
        const ScalarField z1 = wave ? mode(g, zeta1_amp, false) : ScalarField(g);
        const ScalarField z2 = wave ? mode(g, zeta2_amp, false) : ScalarField(g);
        const ScalarField psi = wave ? mode(g, psi_amp, true) : ScalarField(g);
        const ScalarField b = mode(g, bottom_amp, false);
        const auto nsteps = static_cast<long long>(nsteps_f);

        Csv csv({"step", "t", "mass1", "mass2", "momentum_x", "momentum_y", "energy", "max_abs_zeta1",
                 "max_abs_zeta2"});
        auto row = [&](long long n, const Diagnostics& d, double m1, double m2) {
            csv.cell(n).cell(static_cast<double>(n) * dt).cell(d.mass1).cell(d.mass2);
            csv.cell(d.momentum.at(0)).cell(d.momentum.size() > 1 ? d.momentum[1] : 0.0);
            csv.cell(d.energy).cell(m1).cell(m2);
            csv.end_row();
        };
        auto emit = [&](long long n) { return n % every == 0 || n == nsteps; };

        RunRecord rec{"simulate", params_json(p), grid_json(g), nullptr, {}};
        rec.params["system"] = system;
        rec.params["t_end"] = t_end;
        rec.params["dt"] = dt;
        rec.params["init"] = init;
        rec.params["zeta1_amp"] = zeta1_amp;
        rec.params["zeta2_amp"] = zeta2_amp;
        rec.params["psi_amp"] = psi_amp;
        rec.params["bottom_amp"] = bottom_amp;
        rec.params["every"] = every;

        if (system == "swsw" || system == "boussinesq") {
            SurfaceState s = SurfaceState::from_potentials(z1, z2, psi, psi);
            std::optional<BoussinesqCoefficients> c;
            if (system == "boussinesq") {
                c = coeffs.empty() ? BoussinesqCoefficients::original() : coeffs_from(coeffs);
                rec.params["coeffs"] = coeffs_json(*c);
            } else if (!coeffs.empty()) {
                throw ConfigError("--coeffs applies to the boussinesq system only");
            }
            for (long long n = 0;; ++n) {
                if (emit(n))
                    row(n, conservation_diagnostics(s, b, p), s.zeta1().max_abs(), s.zeta2().max_abs());
                if (n == nsteps) break;
                s = c ? boussinesq_step(s, b, p, *c, dt) : swsw_step(s, b, p, dt);
            }
        } else if (system == "rigid-lid") {
            RigidLidState s{z2, grad(psi) - p.gamma() * grad(psi)};
            const double nan = std::numeric_limits<double>::quiet_NaN();
            for (long long n = 0;; ++n) {
                if (emit(n)) {
                    Diagnostics d;
                    d.mass1 = (1.0 - p.eps2() * s.zeta2).integral();
                    d.mass2 = (1.0 / p.delta() + p.eps2() * s.zeta2).integral();
                    for (int a = 0; a < g.dim; ++a) d.momentum.push_back(s.v[a].integral());
                    d.energy = nan;
                    row(n, d, 0.0, s.zeta2.max_abs());
                }
                if (n == nsteps) break;
                s = rigid_lid_step(s, b, p, dt);
            }
        } else if (system == "layer-mean") {
            LayerMeanVariant v;
            if (variant == "swsw-lm")
                v = LayerMeanVariant::SwswLm;
            else if (variant == "bouss-lm")
                v = LayerMeanVariant::BoussLm;
            else
                throw ConfigError("--variant must be swsw-lm or bouss-lm");
            rec.params["variant"] = variant;
            const SurfaceState s0 = SurfaceState::from_potentials(z1, z2, psi, psi);
            LayerMeanState s = layer_mean_state(s0, b, p, s0.gradpsi1(), s0.gradpsi2());
            for (long long n = 0;; ++n) {
                if (emit(n)) {
                    // eps2 zeta2 = h2 - 1/delta + beta b, eps1 zeta1 = h1 + eps2 zeta2 - 1
                    const ScalarField e2z2 = s.h2 - 1.0 / p.delta() + p.beta() * b;
                    const ScalarField e1z1 = s.h1 + e2z2 - 1.0;
                    row(n, conservation_diagnostics(s, p), e1z1.max_abs() / p.eps1(),
                        e2z2.max_abs() / p.eps2());
                }
                if (n == nsteps) break;
                s = layer_mean_step(v, s, b, p, dt);
            }
        } else {
            throw ConfigError("unknown system '" + system + "'");
        }
        finish(csv, rec, common);
    }
};

// ---------------------------------------------------------------------------

struct SymmetrizerCmd {
    Common common;
    double gamma = 0.8;
    int samples = 1000;
    std::uint64_t seed = kDefaultFamilySeed;

    void add(CLI::App& app) {
        auto* sub = app.add_subcommand("check-symmetrizer", "symmetrizer verdicts on random admissible and inadmissible states");
        add_common(sub, common, "check-symmetrizer");
        sub->add_option("--gamma", gamma)->capture_default_str();
        sub->add_option("--samples", samples, "states per condition")->capture_default_str();
        sub->add_option("--seed", seed)->capture_default_str();
    }

    void run() {
        if (samples < 1) throw ConfigError("--samples must be at least 1");
        if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("--gamma must lie in (0, 1)");
        const PhysicalParams p(gamma, 1.0, 0.1, 0.1, 0.1, 0.0);
        using C = SymmetrizerCondition;
        const std::vector<std::pair<std::string, std::optional<C>>> cases{
            {"none", std::nullopt},      {"h1", C::H1AboveFloor}, {"h2", C::H2AboveFloor},
            {"u1", C::U1BelowFloor},     {"u2", C::U2BelowFloor}, {"product", C::Product}};

        Csv csv({"condition", "index", "verdict", "max_asymmetry", "reason"});
        Json counts = Json::object();
        double max_asym = 0.0;
        std::uint64_t case_seed = seed;
        for (const auto& [name, cond] : cases) {
            const auto states = sample_quasilinear_states(static_cast<std::size_t>(samples), cond, gamma, case_seed++);
            long long expected = 0;
            for (std::size_t i = 0; i < states.size(); ++i) {
                const SymmetrizerVerdict v = symmetrizer_check(states[i], p);
                const auto* pd = std::get_if<PositiveDefinite>(&v);
                const auto* bad = std::get_if<Indefinite>(&v);
                const double asym = pd ? pd->max_asymmetry : bad->max_asymmetry;
                max_asym = std::max(max_asym, asym);
                if ((pd != nullptr) == !cond.has_value()) ++expected;
                csv.cell(name).cell(static_cast<long long>(i));
                csv.cell(std::string(pd ? "positive_definite" : "indefinite")).cell(asym);
                csv.cell(bad ? bad->reason : std::string());
                csv.end_row();
            }
            counts[name] = Json{{"samples", samples}, {"expected_verdicts", expected}};
        }
        RunRecord rec{"check-symmetrizer", {{"gamma", gamma}, {"samples", samples}}, {}, seed, {}};
        rec.results["cases"] = counts;
        rec.results["max_asymmetry"] = max_asym;
        finish(csv, rec, common);
    }
};

bool is_config_error(const Error& e) {
    const std::string& n = e.name();
    return n == "InvalidParameter" || n == "InvalidArgument" || n == "ShapeMismatch" || n == "Unsupported";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-layer wave model hierarchy: operators, dispersion, consistency and simulation"};
    app.name("stratwave");
    app.set_config("--config", "", "INI file; [subcommand] sections, flags override");
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    DispersionCmd dispersion;
    OptimizeCmd optimize;
    DtnConvergenceCmd dtn;
    ConsistencyCmd consistency;
    SimulateCmd simulate;
    SymmetrizerCmd symmetrizer;
    dispersion.add(app);
    optimize.add(app);
    dtn.add(app);
    consistency.add(app);
    simulate.add(app);
    symmetrizer.add(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (app.got_subcommand("dispersion")) dispersion.run();
        else if (app.got_subcommand("optimize-coeffs")) optimize.run();
        else if (app.got_subcommand("dtn-convergence")) dtn.run();
        else if (app.got_subcommand("consistency")) consistency.run();
        else if (app.got_subcommand("simulate")) simulate.run();
        else if (app.got_subcommand("check-symmetrizer")) symmetrizer.run();
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.name() << ": " << e.what() << "\n";
        return is_config_error(e) ? kExitConfig : kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace stratwave::cli
