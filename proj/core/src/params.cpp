#include "stratwave/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratwave/errors.hpp"

namespace stratwave {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

}  // namespace

PhysicalParams::PhysicalParams(double gamma, double delta, double mu, double eps1,
                               double eps2, double beta)
    : PhysicalParams(gamma, delta, mu, eps1, eps2, beta, Options{}) {}

PhysicalParams::PhysicalParams(double gamma, double delta, double mu, double eps1,
                               double eps2, double beta, const Options& options)
    : gamma_(gamma), delta_(delta), mu_(mu), eps1_(eps1), eps2_(eps2), beta_(beta),
      alpha_(0.0), allow_unstable_(options.allow_unstable_stratification) {
    for (double v : {gamma, delta, mu, eps1, eps2, beta})
        require(std::isfinite(v), "parameters must be finite");
    require(gamma >= 0.0, "gamma must be nonnegative");
    require(gamma < 1.0 || allow_unstable_,
            "gamma >= 1 rejected (unstable stratification); set the override to probe it");
    require(delta > 0.0, "delta must be positive");
    require(mu > 0.0, "mu must be positive");
    require(eps1 >= 0.0 && eps2 >= 0.0, "eps1, eps2 must be nonnegative");
    require(beta >= 0.0, "beta must be nonnegative");

    if (eps2 > 0.0) {
        alpha_ = eps1 / eps2;
        if (options.alpha) {
            require(std::abs(*options.alpha * eps2 - eps1) <= 1e-12 * std::max(eps1, eps2),
                    "explicit alpha inconsistent with eps1/eps2");
        }
    } else if (options.alpha) {
        require(std::isfinite(*options.alpha) && *options.alpha >= 0.0,
                "alpha must be finite and nonnegative");
        require(eps1 == 0.0, "eps2 == 0 with eps1 > 0 gives infinite alpha");
        alpha_ = *options.alpha;
    } else {
        require(eps1 == 0.0, "eps2 == 0 with eps1 > 0 gives infinite alpha");
        alpha_ = 0.0;
    }
}

namespace {

PhysicalParams::Options options_of(const PhysicalParams& p) {
    PhysicalParams::Options o;
    o.allow_unstable_stratification = p.unstable_stratification_allowed();
    if (p.eps2() == 0.0) o.alpha = p.alpha();
    return o;
}

}  // namespace

PhysicalParams PhysicalParams::with_mu(double mu) const {
    return {gamma_, delta_, mu, eps1_, eps2_, beta_, options_of(*this)};
}

PhysicalParams PhysicalParams::with_eps(double eps1, double eps2) const {
    Options o = options_of(*this);
    if (eps2 > 0.0) o.alpha.reset();
    return {gamma_, delta_, mu_, eps1, eps2, beta_, o};
}

PhysicalParams PhysicalParams::with_beta(double beta) const {
    return {gamma_, delta_, mu_, eps1_, eps2_, beta, options_of(*this)};
}

PhysicalParams PhysicalParams::with_gamma(double gamma) const {
    return {gamma, delta_, mu_, eps1_, eps2_, beta_, options_of(*this)};
}

PhysicalParams PhysicalParams::with_delta(double delta) const {
    return {gamma_, delta, mu_, eps1_, eps2_, beta_, options_of(*this)};
}

}  // namespace stratwave
