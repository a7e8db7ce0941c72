#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "stratwave/grid.hpp"

namespace stratwave {

struct Wavevector {
    double kx = 0.0;
    double ky = 0.0;
    double norm() const;
};

using Multiplier = std::function<double(const Wavevector&)>;

// Half-complex spectrum of a real field, normalized so that a unit cosine has
// coefficient 1/2 at +k. Modes are stored y-major with jx in [0, nx/2].
class Spectrum {
public:
    explicit Spectrum(const GridSpec& grid);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return c_.size(); }
    int half_nx() const noexcept { return grid_.nx / 2 + 1; }

    std::complex<double>& operator[](std::size_t i) { return c_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return c_[i]; }
    std::complex<double>* data() noexcept { return c_.data(); }
    const std::complex<double>* data() const noexcept { return c_.data(); }

    // Signed mode numbers j in [-n/2, n/2).
    int jx(std::size_t i) const noexcept;
    int jy(std::size_t i) const noexcept;
    Wavevector wavevector(std::size_t i) const noexcept;
    bool nyquist_x(std::size_t i) const noexcept;
    bool nyquist_y(std::size_t i) const noexcept;
    // Number of full-spectrum modes represented by stored mode i (1 or 2).
    double multiplicity(std::size_t i) const noexcept;

private:
    GridSpec grid_;
    std::vector<std::complex<double>> c_;
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

// Throws NonFiniteMultiplier if m is NaN or infinite at any grid wavevector.
ScalarField apply_multiplier(const ScalarField& f, const Multiplier& m);

ScalarField derivative(const ScalarField& f, int axis);
VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
// Scalar curl of a 2D field; zero field in 1D.
ScalarField curl(const VectorField& v);

// Zeroes modes with |j| > n/3 along any direction.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

// Zero-mean potential p with grad p = v. The mean of v must vanish (a periodic
// potential exists only then); throws InvalidArgument otherwise.
ScalarField potential_from_gradient(const VectorField& v);

// Gradient part of v: the Helmholtz projection onto gradients of periodic potentials.
VectorField gradient_projection(const VectorField& v);

// Discrete Sobolev norm sqrt(|T| * sum (1+|k|^2)^s |f_k|^2); s = 0 is the L2 norm.
double sobolev_norm(const ScalarField& f, double s = 2.0);
double sobolev_norm(const VectorField& v, double s = 2.0);

// Cyclic shift by whole grid cells.
ScalarField translate(const ScalarField& f, int shift_x, int shift_y = 0);
VectorField translate(const VectorField& v, int shift_x, int shift_y = 0);

}  // namespace stratwave
