#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chebyshev.hpp"
#include "stratwave/dtn.hpp"
#include "stratwave/errors.hpp"
#include "stratwave/spectral.hpp"

namespace stratwave {

// Nodes, differentiation matrices and pointwise coefficients of one strip.
class StripGeometry {
public:
    GridSpec grid;
    int nz = 0;
    double mu = 0.0;
    double z_bottom = 0.0;
    std::vector<double> z;   // top to bottom
    Eigen::MatrixXd dx;      // nx x nx
    Eigen::MatrixXd dz;      // nz x nz, d/dz on the unit strip
    Eigen::VectorXd weights; // quadrature on the unit strip
    ScalarField h;
    ScalarField sigma;
    // P entries at node (iz, ix), stored iz * nx + ix.
    std::vector<double> a, c, e;
    std::vector<double> sx;  // d s / d x

    std::size_t n() const { return static_cast<std::size_t>(nz) * grid.nx; }
    std::size_t idx(int iz, int ix) const { return static_cast<std::size_t>(iz) * grid.nx + ix; }
};

namespace {

std::shared_ptr<StripGeometry> make_geometry(const ScalarField& h, const ScalarField& sigma,
                                             double mu, int nz, double z_bottom) {
    auto g = std::make_shared<StripGeometry>();
    g->grid = h.grid();
    g->nz = nz;
    g->mu = mu;
    g->z_bottom = z_bottom;
    g->h = h;
    g->sigma = sigma;
    const int nx = g->grid.nx;
    g->dx = detail::fourier_diff(nx, g->grid.lx);
    const Eigen::VectorXd x = detail::chebyshev_nodes(nz);
    g->dz = 2.0 * detail::chebyshev_diff(nz);
    g->weights = 0.5 * detail::clenshaw_curtis(nz);
    g->z.resize(static_cast<std::size_t>(nz));
    for (int j = 0; j < nz; ++j) g->z[static_cast<std::size_t>(j)] = z_bottom + 0.5 * (x(j) + 1.0);

    const ScalarField hx = derivative(h, 0);
    const ScalarField sigx = derivative(sigma, 0);
    const std::size_t n = g->n();
    g->a.resize(n);
    g->c.resize(n);
    g->e.resize(n);
    g->sx.resize(n);
    for (int iz = 0; iz < nz; ++iz)
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t k = g->idx(iz, ix);
            const double s_x = g->z[static_cast<std::size_t>(iz)] * hx[ix] + sigx[ix];
            g->sx[k] = s_x;
            g->a[k] = mu * h[ix];
            g->c[k] = -mu * s_x;
            g->e[k] = (1.0 + mu * s_x * s_x) / h[ix];
        }
    return g;
}

// Horizontal and vertical derivatives of nodal values.
void nodal_derivatives(const StripGeometry& g, const Eigen::VectorXd& phi, Eigen::VectorXd& px,
                       Eigen::VectorXd& pz) {
    const int nx = g.grid.nx;
    const int nz = g.nz;
    Eigen::Map<const Eigen::MatrixXd> P(phi.data(), nx, nz);  // column iz holds level iz
    Eigen::MatrixXd PX = g.dx * P;
    Eigen::MatrixXd PZ = P * g.dz.transpose();
    px = Eigen::Map<Eigen::VectorXd>(PX.data(), PX.size());
    pz = Eigen::Map<Eigen::VectorXd>(PZ.data(), PZ.size());
}

// div(P grad phi) at every node.
Eigen::VectorXd apply_operator(const StripGeometry& g, const Eigen::VectorXd& phi,
                               Eigen::VectorXd* magnitude = nullptr) {
    const int nx = g.grid.nx;
    const int nz = g.nz;
    Eigen::VectorXd px, pz;
    nodal_derivatives(g, phi, px, pz);
    Eigen::MatrixXd FX(nx, nz), FZ(nx, nz);
    for (int iz = 0; iz < nz; ++iz)
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t k = g.idx(iz, ix);
            FX(ix, iz) = g.a[k] * px(static_cast<Eigen::Index>(k)) + g.c[k] * pz(static_cast<Eigen::Index>(k));
            FZ(ix, iz) = g.c[k] * px(static_cast<Eigen::Index>(k)) + g.e[k] * pz(static_cast<Eigen::Index>(k));
        }
    Eigen::MatrixXd L = g.dx * FX + FZ * g.dz.transpose();
    if (magnitude) {
        // Size of the summed terms, the scale of the rounding error in L.
        Eigen::MatrixXd M = g.dx.cwiseAbs() * FX.cwiseAbs() + FZ.cwiseAbs() * g.dz.transpose().cwiseAbs();
        *magnitude = Eigen::Map<Eigen::VectorXd>(M.data(), M.size());
    }
    return Eigen::Map<Eigen::VectorXd>(L.data(), L.size());
}

}  // namespace

struct StripProblem::Impl {
    Layer which;
    std::shared_ptr<StripGeometry> geo;
    // Row-major: assembly writes one row at a time.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> A;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    double norm_a = 0.0;
};

StripProblem::StripProblem(Layer which, const ScalarField& thickness, const ScalarField& sigma,
                           double mu, int nz)
    : impl_(std::make_unique<Impl>()) {
    const GridSpec& grid = thickness.grid();
    if (grid.dim != 1) throw Unsupported("the strip solver supports one horizontal dimension");
    require_same_grid(grid, sigma.grid(), "StripProblem");
    if (nz < 8) throw InvalidArgument("nz must be at least 8");
    if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
    if (thickness.min() <= 0.0) throw ConnectednessViolation("nonpositive layer thickness");

    impl_->which = which;
    impl_->geo = make_geometry(thickness, sigma, mu, nz, which == Layer::Lower ? -1.0 : 0.0);
    const StripGeometry& g = *impl_->geo;
    const int nx = grid.nx;
    const Eigen::Index n = static_cast<Eigen::Index>(g.n());
    auto& A = impl_->A;
    A.setZero(n, n);

    auto row = [&](int iz, int ix) { return static_cast<Eigen::Index>(g.idx(iz, ix)); };
    const Eigen::MatrixXd& Dx = g.dx;
    const Eigen::MatrixXd& Dz = g.dz;

    for (int iz = 1; iz < nz - 1; ++iz) {
        // d/dx (a d/dx): block-diagonal in iz
        for (int ix = 0; ix < nx; ++ix)
            for (int jx = 0; jx < nx; ++jx) {
                double s = 0.0;
                for (int m = 0; m < nx; ++m) s += Dx(ix, m) * g.a[g.idx(iz, m)] * Dx(m, jx);
                A(row(iz, ix), row(iz, jx)) += s;
            }
        // d/dx (c d/dz)
        for (int ix = 0; ix < nx; ++ix)
            for (int m = 0; m < nx; ++m) {
                const double w = Dx(ix, m) * g.c[g.idx(iz, m)];
                if (w == 0.0) continue;
                for (int jz = 0; jz < nz; ++jz) A(row(iz, ix), row(jz, m)) += w * Dz(iz, jz);
            }
        // d/dz (c d/dx)
        for (int m = 0; m < nz; ++m)
            for (int ix = 0; ix < nx; ++ix) {
                const double w = Dz(iz, m) * g.c[g.idx(m, ix)];
                for (int jx = 0; jx < nx; ++jx) A(row(iz, ix), row(m, jx)) += w * Dx(ix, jx);
            }
        // d/dz (e d/dz)
        for (int ix = 0; ix < nx; ++ix)
            for (int jz = 0; jz < nz; ++jz) {
                double s = 0.0;
                for (int m = 0; m < nz; ++m) s += Dz(iz, m) * g.e[g.idx(m, ix)] * Dz(m, jz);
                A(row(iz, ix), row(jz, ix)) += s;
            }
    }
    // Dirichlet rows at the top
    for (int ix = 0; ix < nx; ++ix) A(row(0, ix), row(0, ix)) = 1.0;
    // co-normal flux rows at the bottom
    const int ib = nz - 1;
    for (int ix = 0; ix < nx; ++ix) {
        const std::size_t k = g.idx(ib, ix);
        for (int jx = 0; jx < nx; ++jx) A(row(ib, ix), row(ib, jx)) += g.c[k] * Dx(ix, jx);
        for (int jz = 0; jz < nz; ++jz) A(row(ib, ix), row(jz, ix)) += g.e[k] * Dz(ib, jz);
    }

    impl_->norm_a = A.cwiseAbs().rowwise().sum().maxCoeff();
    impl_->lu.compute(A);
}

StripProblem::~StripProblem() = default;
StripProblem::StripProblem(StripProblem&&) noexcept = default;
StripProblem& StripProblem::operator=(StripProblem&&) noexcept = default;

const GridSpec& StripProblem::grid() const noexcept { return impl_->geo->grid; }
int StripProblem::nz() const noexcept { return impl_->geo->nz; }

StripSolution StripProblem::solve(const ScalarField& dirichlet_top,
                                  const ScalarField& conormal_bottom) const {
    const StripGeometry& g = *impl_->geo;
    require_same_grid(g.grid, dirichlet_top.grid(), "StripProblem::solve");
    require_same_grid(g.grid, conormal_bottom.grid(), "StripProblem::solve");
    const int nx = g.grid.nx;
    const int nz = g.nz;
    const Eigen::Index n = static_cast<Eigen::Index>(g.n());

    // Lift: the top data extended constant in z; solve for the correction.
    Eigen::VectorXd lift(n);
    for (int iz = 0; iz < nz; ++iz)
        for (int ix = 0; ix < nx; ++ix)
            lift(static_cast<Eigen::Index>(g.idx(iz, ix))) = dirichlet_top[static_cast<std::size_t>(ix)];
    Eigen::VectorXd data = Eigen::VectorXd::Zero(n);
    for (int ix = 0; ix < nx; ++ix) {
        data(static_cast<Eigen::Index>(g.idx(0, ix))) = dirichlet_top[static_cast<std::size_t>(ix)];
        data(static_cast<Eigen::Index>(g.idx(nz - 1, ix))) = conormal_bottom[static_cast<std::size_t>(ix)];
    }
    const Eigen::VectorXd rhs = data - impl_->A * lift;

    Eigen::VectorXd w = impl_->lu.solve(rhs);
    Eigen::VectorXd r = rhs - impl_->A * w;
    w += impl_->lu.solve(r);  // one step of iterative refinement
    r = rhs - impl_->A * w;

    const double scale = impl_->norm_a * w.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
    const double rel = scale > 0.0 ? r.cwiseAbs().maxCoeff() / scale : 0.0;
    if (!(rel <= kStripTolerance) || !w.allFinite()) {
        std::ostringstream msg;
        msg << "strip solve relative residual " << rel << " exceeds " << kStripTolerance;
        throw SolverDivergence(msg.str());
    }

    StripSolution sol;
    sol.which_ = impl_->which;
    sol.geo_ = impl_->geo;
    const Eigen::VectorXd phi = lift + w;
    sol.phi_.assign(phi.data(), phi.data() + phi.size());
    sol.linear_residual_ = rel;
    return sol;
}

double StripProblem::min_coercivity() const {
    const StripGeometry& g = *impl_->geo;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < g.n(); ++k) {
        // smallest eigenvalue of [[a, c], [c, e]]
        const double tr = g.a[k] + g.e[k];
        const double det = g.a[k] * g.e[k] - g.c[k] * g.c[k];
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        m = std::min(m, 0.5 * tr - disc);
    }
    return m;
}

const GridSpec& StripSolution::grid() const noexcept { return geo_->grid; }
int StripSolution::nz() const noexcept { return geo_->nz; }
double StripSolution::mu() const noexcept { return geo_->mu; }
const std::vector<double>& StripSolution::z() const noexcept { return geo_->z; }
const ScalarField& StripSolution::thickness() const noexcept { return geo_->h; }

double StripSolution::phi(int iz, int ix) const { return phi_[geo_->idx(iz, ix)]; }

ScalarField StripSolution::level(int iz) const {
    ScalarField out(geo_->grid);
    for (int ix = 0; ix < geo_->grid.nx; ++ix) out[static_cast<std::size_t>(ix)] = phi(iz, ix);
    return out;
}

ScalarField StripSolution::trace_top() const { return level(0); }
ScalarField StripSolution::trace_bottom() const { return level(geo_->nz - 1); }

namespace {

ScalarField conormal_at(const StripGeometry& g, const std::vector<double>& phi, int iz) {
    const int nx = g.grid.nx;
    ScalarField out(g.grid);
    for (int ix = 0; ix < nx; ++ix) {
        double px = 0.0, pz = 0.0;
        for (int jx = 0; jx < nx; ++jx) px += g.dx(ix, jx) * phi[g.idx(iz, jx)];
        for (int jz = 0; jz < g.nz; ++jz) pz += g.dz(iz, jz) * phi[g.idx(jz, ix)];
        const std::size_t k = g.idx(iz, ix);
        out[static_cast<std::size_t>(ix)] = g.c[k] * px + g.e[k] * pz;
    }
    return out;
}

}  // namespace

ScalarField StripSolution::conormal_top() const { return conormal_at(*geo_, phi_, 0); }
ScalarField StripSolution::conormal_bottom() const { return conormal_at(*geo_, phi_, geo_->nz - 1); }

VectorField StripSolution::gradient_trace_bottom() const { return grad(trace_bottom()); }

double StripSolution::pde_residual() const {
    const StripGeometry& g = *geo_;
    const Eigen::Map<const Eigen::VectorXd> phi(phi_.data(), static_cast<Eigen::Index>(phi_.size()));
    Eigen::VectorXd mag;
    const Eigen::VectorXd L = apply_operator(g, phi, &mag);
    double num = 0.0;
    double den = 0.0;
    for (int iz = 1; iz < g.nz - 1; ++iz)
        for (int ix = 0; ix < g.grid.nx; ++ix) {
            const auto k = static_cast<Eigen::Index>(g.idx(iz, ix));
            num = std::max(num, std::abs(L(k)));
            den = std::max(den, mag(k));
        }
    return den > 0.0 ? num / den : num;
}

VectorField mean_velocity(const StripSolution& strip) {
    const StripGeometry& g = *strip.geo_;
    const Eigen::Map<const Eigen::VectorXd> phi(strip.phi_.data(),
                                                static_cast<Eigen::Index>(strip.phi_.size()));
    Eigen::VectorXd px, pz;
    nodal_derivatives(g, phi, px, pz);
    ScalarField u(g.grid);
    for (int ix = 0; ix < g.grid.nx; ++ix) {
        double s = 0.0;
        for (int iz = 0; iz < g.nz; ++iz) {
            const std::size_t k = g.idx(iz, ix);
            const auto kk = static_cast<Eigen::Index>(k);
            // physical horizontal velocity at the node
            s += g.weights(iz) * (px(kk) - g.sx[k] / g.h[static_cast<std::size_t>(ix)] * pz(kk));
        }
        u[static_cast<std::size_t>(ix)] = s;
    }
    return VectorField(std::vector<ScalarField>{u});
}

namespace {

ScalarField without_mean(const ScalarField& f) { return f - f.mean(); }

}  // namespace

StripSolution solve_lower(const ScalarField& zeta2, const ScalarField& b, const ScalarField& psi2,
                          const PhysicalParams& p, int nz, double h_min) {
    const ScalarField zero(zeta2.grid());
    const auto [h1, h2] = thicknesses(zero, zeta2, b, p, h_min);
    (void)h1;
    StripProblem lower(Layer::Lower, h2, p.eps2() * zeta2, p.mu(), nz);
    return lower.solve(without_mean(psi2), zero);
}

StripSolution solve_upper(const ScalarField& zeta1, const ScalarField& zeta2, const ScalarField& b,
                          const ScalarField& psi1, const ScalarField& psi2, const PhysicalParams& p,
                          int nz, double h_min) {
    TwoLayerStrips strips(zeta1, zeta2, b, p, nz, h_min);
    return strips.apply(psi1, psi2).upper;
}

TwoLayerStrips::TwoLayerStrips(const ScalarField& zeta1, const ScalarField& zeta2,
                               const ScalarField& b, const PhysicalParams& p, int nz, double h_min)
    : lower_([&] {
          const auto th = thicknesses(zeta1, zeta2, b, p, h_min);
          return StripProblem(Layer::Lower, th.second, p.eps2() * zeta2, p.mu(), nz);
      }()),
      upper_([&] {
          const auto th = thicknesses(zeta1, zeta2, b, p, h_min);
          return StripProblem(Layer::Upper, th.first, p.eps2() * zeta2, p.mu(), nz);
      }()) {}

NumericOperators TwoLayerStrips::apply(const ScalarField& psi1, const ScalarField& psi2) const {
    const ScalarField zero(psi1.grid());
    StripSolution lo = lower_.solve(without_mean(psi2), zero);
    ScalarField g2 = lo.conormal_top();
    StripSolution up = upper_.solve(without_mean(psi1), g2);
    ScalarField g1 = up.conormal_top();
    ScalarField trace = up.trace_bottom();
    VectorField h = grad(trace);
    return {std::move(g1), std::move(g2), std::move(h), std::move(trace), std::move(lo),
            std::move(up)};
}

NumericOperators numeric_operators(const SurfaceState& state, const ScalarField& b,
                                   const PhysicalParams& params, int nz) {
    TwoLayerStrips strips(state.zeta1(), state.zeta2(), b, params, nz, state.h_min());
    return strips.apply(state.psi1(), state.psi2());
}

}  // namespace stratwave
