#pragma once

#include <optional>

namespace stratwave {

// Dimensionless numbers of the two-layer problem.
//   gamma  density ratio (upper/lower)
//   delta  depth ratio (upper/lower)
//   mu     shallowness
//   eps1   surface amplitude parameter
//   eps2   interface amplitude parameter
//   beta   bottom amplitude parameter
//   alpha  eps1/eps2
class PhysicalParams {
public:
    struct Options {
        // Accept gamma >= 1 (unstable stratification). Only used to probe ill-posedness.
        bool allow_unstable_stratification = false;
        // Required when eps2 == 0: the ratio eps1/eps2 is then a free parameter.
        std::optional<double> alpha;
    };

    PhysicalParams(double gamma, double delta, double mu, double eps1, double eps2,
                   double beta);
    PhysicalParams(double gamma, double delta, double mu, double eps1, double eps2,
                   double beta, const Options& options);

    double gamma() const noexcept { return gamma_; }
    double delta() const noexcept { return delta_; }
    double mu() const noexcept { return mu_; }
    double eps1() const noexcept { return eps1_; }
    double eps2() const noexcept { return eps2_; }
    double beta() const noexcept { return beta_; }
    double alpha() const noexcept { return alpha_; }
    bool unstable_stratification_allowed() const noexcept { return allow_unstable_; }

    PhysicalParams with_mu(double mu) const;
    PhysicalParams with_eps(double eps1, double eps2) const;
    PhysicalParams with_beta(double beta) const;
    PhysicalParams with_gamma(double gamma) const;
    PhysicalParams with_delta(double delta) const;

private:
    double gamma_, delta_, mu_, eps1_, eps2_, beta_, alpha_;
    bool allow_unstable_;
};

}  // namespace stratwave
