#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "stratwave/errors.hpp"
#include "stratwave/models.hpp"

namespace stratwave {

QuasilinearState QuasilinearState::from_surface(const SurfaceState& s, const ScalarField& b,
                                                const PhysicalParams& p) {
    auto [h1, h2] = thicknesses(s, p, b);
    return {std::move(h1), std::move(h2), p.eps2() * s.gradpsi1(), p.eps2() * s.gradpsi2(), std::nullopt};
}

Matrix6 symmetrizer_matrix(double h1, double h2, const std::array<double, 2>& u1,
                           const std::array<double, 2>& u2, double g) {
    return {g,         g,     g * u1[0], g * u1[1], 0.0,   0.0,
            g,         1.0,   0.0,       0.0,       u2[0], u2[1],
            g * u1[0], 0.0,   g * h1,    0.0,       0.0,   0.0,
            g * u1[1], 0.0,   0.0,       g * h1,    0.0,   0.0,
            0.0,       u2[0], 0.0,       0.0,       h2,    0.0,
            0.0,       u2[1], 0.0,       0.0,       0.0,   h2};
}

Matrix6 flux_matrix(double h1, double h2, const std::array<double, 2>& u1,
                    const std::array<double, 2>& u2, double g, const std::array<double, 2>& xi) {
    const Matrix6 a1 = {u1[0], 0.0,   h1,    0.0,   0.0,   0.0,
                        0.0,   u2[0], 0.0,   0.0,   h2,    0.0,
                        1.0,   1.0,   u1[0], u1[1], 0.0,   0.0,
                        0.0,   0.0,   0.0,   0.0,   0.0,   0.0,
                        g,     1.0,   0.0,   0.0,   u2[0], u2[1],
                        0.0,   0.0,   0.0,   0.0,   0.0,   0.0};
    const Matrix6 a2 = {u1[1], 0.0,   0.0,   h1,    0.0,   0.0,
                        0.0,   u2[1], 0.0,   0.0,   0.0,   h2,
                        0.0,   0.0,   0.0,   0.0,   0.0,   0.0,
                        1.0,   1.0,   u1[0], u1[1], 0.0,   0.0,
                        0.0,   0.0,   0.0,   0.0,   0.0,   0.0,
                        g,     1.0,   0.0,   0.0,   u2[0], u2[1]};
    Matrix6 out{};
    for (std::size_t i = 0; i < 36; ++i) out[i] = xi[0] * a1[i] + xi[1] * a2[i];
    return out;
}

namespace {

using Mat = Eigen::Matrix<double, 6, 6, Eigen::RowMajor>;

double asymmetry(const Matrix6& s, const Matrix6& a) {
    const Mat sa = Eigen::Map<const Mat>(s.data()) * Eigen::Map<const Mat>(a.data());
    return (sa - sa.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

SymmetrizerVerdict symmetrizer_check(const QuasilinearState& q, const PhysicalParams& p) {
    const GridSpec& grid = q.h1.grid();
    require_same_grid(grid, q.h2.grid(), "symmetrizer_check");
    require_same_grid(grid, q.u1.grid(), "symmetrizer_check");
    require_same_grid(grid, q.u2.grid(), "symmetrizer_check");
    const double g = p.gamma();
    const std::size_t n = grid.size();
    const bool two_d = q.u1.dim() == 2;

    auto vel = [&](const VectorField& u, std::size_t i) {
        return std::array<double, 2>{u[0][i], two_d ? u[1][i] : 0.0};
    };
    auto sq = [](const std::array<double, 2>& u) { return u[0] * u[0] + u[1] * u[1]; };

    // Without an explicit floor, the best admissible h lies strictly between
    // max |u_i|^2 and min h_i.
    std::optional<Indefinite> global;
    if (!q.floor) {
        double hmin = std::numeric_limits<double>::infinity();
        double umax = 0.0;
        std::size_t ih = 0, iu = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double hm = std::min(q.h1[i], q.h2[i]);
            const double um = std::max(sq(vel(q.u1, i)), sq(vel(q.u2, i)));
            if (hm < hmin) hmin = hm, ih = i;
            if (um > umax) umax = um, iu = i;
        }
        if (!(hmin > 0.0)) global = Indefinite{ih, "nonpositive layer thickness", 0.0};
        else if (!(umax < hmin))
            global = Indefinite{iu, "no admissible h: max |u_i|^2 >= min h_i", 0.0};
    }

    const std::array<std::array<double, 2>, 3> dirs{{{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}}};
    const std::size_t ndirs = two_d ? 3 : 1;
    double max_asym = 0.0;
    std::optional<Indefinite> first;
    for (std::size_t i = 0; i < n; ++i) {
        const double h1 = q.h1[i];
        const double h2 = q.h2[i];
        const auto u1 = vel(q.u1, i);
        const auto u2 = vel(q.u2, i);
        const Matrix6 s = symmetrizer_matrix(h1, h2, u1, u2, g);
        for (std::size_t k = 0; k < ndirs; ++k)
            max_asym = std::max(max_asym, asymmetry(s, flux_matrix(h1, h2, u1, u2, g, dirs[k])));
        if (first) continue;

        const char* reason = nullptr;
        if (q.floor) {
            const double f = *q.floor;
            if (!(h1 > f)) reason = "h1 <= h";
            else if (!(h2 > f)) reason = "h2 <= h";
            else if (!(sq(u1) < f)) reason = "|u1|^2 >= h";
            else if (!(sq(u2) < f)) reason = "|u2|^2 >= h";
        }
        if (!reason && !((h1 - sq(u1)) * (h2 - sq(u2)) > g * h1 * h2))
            reason = "(h1 - |u1|^2)(h2 - |u2|^2) <= gamma h1 h2";
        if (!reason) {
            Eigen::LLT<Mat> llt(Eigen::Map<const Mat>(s.data()));
            if (llt.info() != Eigen::Success) reason = "S(U) is not positive definite";
        }
        if (reason) first = Indefinite{i, reason, 0.0};
    }
    if (global) first = global;
    if (first) {
        first->max_asymmetry = max_asym;
        return *first;
    }
    return PositiveDefinite{max_asym};
}

std::vector<QuasilinearState> sample_quasilinear_states(std::size_t count,
                                                        std::optional<SymmetrizerCondition> violated,
                                                        double g, std::uint64_t seed) {
    if (!(g > 0.0 && g < 1.0)) throw InvalidParameter("gamma must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto velocity = [&](double speed) {
        const double t = 2.0 * std::numbers::pi * unit(rng);
        return std::array<double, 2>{speed * std::cos(t), speed * std::sin(t)};
    };
    // Constant fields on the smallest admissible grid.
    const GridSpec node = GridSpec::plane(8, 8, 1.0, 1.0);
    using C = SymmetrizerCondition;

    std::vector<QuasilinearState> out;
    out.reserve(count);
    while (out.size() < count) {
        const double h = 0.1 + 0.9 * unit(rng);
        double h1 = h * (1.0 + 2.0 * unit(rng));
        double h2 = h * (1.0 + 2.0 * unit(rng));
        double s1 = std::sqrt(h) * unit(rng);
        double s2 = std::sqrt(h) * unit(rng);
        if (violated == C::H1AboveFloor) h1 = h * (0.2 + 0.8 * unit(rng));
        if (violated == C::H2AboveFloor) h2 = h * (0.2 + 0.8 * unit(rng));
        if (violated == C::U1BelowFloor) s1 = std::sqrt(h) * (1.0 + unit(rng));
        if (violated == C::U2BelowFloor) s2 = std::sqrt(h) * (1.0 + unit(rng));
        const bool product = (h1 - s1 * s1) * (h2 - s2 * s2) > g * h1 * h2;
        if (!violated && !product) continue;
        if (violated == C::Product && product) continue;
        const auto u1 = velocity(s1);
        const auto u2 = velocity(s2);
        out.push_back({ScalarField(node, h1), ScalarField(node, h2),
                       VectorField(std::vector<ScalarField>{ScalarField(node, u1[0]), ScalarField(node, u1[1])}),
                       VectorField(std::vector<ScalarField>{ScalarField(node, u2[0]), ScalarField(node, u2[1])}),
                       h});
    }
    return out;
}

}  // namespace stratwave
