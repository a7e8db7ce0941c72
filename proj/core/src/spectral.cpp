#include "stratwave/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "stratwave/errors.hpp"

namespace stratwave {

namespace {

struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// FFTW's planner is not thread-safe; execution with new arrays is.
const Plans& plans_for(const GridSpec& g) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, Plans> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(g.dim, g.nx, g.ny);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const std::size_t nreal = g.size();
    const std::size_t ncplx = static_cast<std::size_t>(g.ny) * (g.nx / 2 + 1);
    double* rbuf = fftw_alloc_real(nreal);
    fftw_complex* cbuf = fftw_alloc_complex(ncplx);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    if (g.dim == 1) {
        p.r2c = fftw_plan_dft_r2c_1d(g.nx, rbuf, cbuf, flags);
        p.c2r = fftw_plan_dft_c2r_1d(g.nx, cbuf, rbuf, flags);
    } else {
        p.r2c = fftw_plan_dft_r2c_2d(g.ny, g.nx, rbuf, cbuf, flags);
        p.c2r = fftw_plan_dft_c2r_2d(g.ny, g.nx, cbuf, rbuf, flags);
    }
    fftw_free(rbuf);
    fftw_free(cbuf);
    return cache.emplace(key, p).first->second;
}

int signed_mode(int j, int n) { return j < n / 2 ? j : j - n; }

}  // namespace

double Wavevector::norm() const { return std::hypot(kx, ky); }

Spectrum::Spectrum(const GridSpec& grid)
    : grid_(grid), c_(static_cast<std::size_t>(grid.ny) * (grid.nx / 2 + 1)) {}

int Spectrum::jx(std::size_t i) const noexcept {
    return signed_mode(static_cast<int>(i % static_cast<std::size_t>(half_nx())), grid_.nx);
}

int Spectrum::jy(std::size_t i) const noexcept {
    if (grid_.dim == 1) return 0;
    return signed_mode(static_cast<int>(i / static_cast<std::size_t>(half_nx())), grid_.ny);
}

Wavevector Spectrum::wavevector(std::size_t i) const noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Wavevector k;
    k.kx = two_pi * jx(i) / grid_.lx;
    if (grid_.dim == 2) k.ky = two_pi * jy(i) / grid_.ly;
    return k;
}

bool Spectrum::nyquist_x(std::size_t i) const noexcept { return jx(i) == -grid_.nx / 2; }

bool Spectrum::nyquist_y(std::size_t i) const noexcept {
    return grid_.dim == 2 && jy(i) == -grid_.ny / 2;
}

double Spectrum::multiplicity(std::size_t i) const noexcept {
    const int m = static_cast<int>(i % static_cast<std::size_t>(half_nx()));
    return (m == 0 || m == grid_.nx / 2) ? 1.0 : 2.0;
}

Spectrum forward(const ScalarField& f) {
    const GridSpec& g = f.grid();
    Spectrum s(g);
    fftw_execute_dft_r2c(plans_for(g).r2c, const_cast<double*>(f.data()),
                         reinterpret_cast<fftw_complex*>(s.data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= scale;
    return s;
}

ScalarField inverse(const Spectrum& s) {
    const GridSpec& g = s.grid();
    Spectrum work = s;  // c2r overwrites its input
    ScalarField out(g);
    fftw_execute_dft_c2r(plans_for(g).c2r, reinterpret_cast<fftw_complex*>(work.data()),
                         out.data());
    return out;
}

ScalarField apply_multiplier(const ScalarField& f, const Multiplier& m) {
    Spectrum s = forward(f);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = m(s.wavevector(i));
        if (!std::isfinite(v)) throw NonFiniteMultiplier("multiplier is not finite at a grid wavevector");
        s[i] *= v;
    }
    return inverse(s);
}

ScalarField derivative(const ScalarField& f, int axis) {
    if (axis < 0 || axis >= f.grid().dim) throw InvalidArgument("derivative axis out of range");
    Spectrum s = forward(f);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Wavevector k = s.wavevector(i);
        const bool nyq = axis == 0 ? s.nyquist_x(i) : s.nyquist_y(i);
        const double kk = axis == 0 ? k.kx : k.ky;
        s[i] = nyq ? 0.0 : s[i] * std::complex<double>(0.0, kk);
    }
    return inverse(s);
}

VectorField grad(const ScalarField& f) {
    std::vector<ScalarField> c;
    for (int a = 0; a < f.grid().dim; ++a) c.push_back(derivative(f, a));
    return VectorField(std::move(c));
}

ScalarField div(const VectorField& v) {
    ScalarField out(v.grid());
    for (int a = 0; a < v.dim(); ++a) out += derivative(v[a], a);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    Spectrum s = forward(f);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Wavevector k = s.wavevector(i);
        const double kx = s.nyquist_x(i) ? 0.0 : k.kx;
        const double ky = s.nyquist_y(i) ? 0.0 : k.ky;
        s[i] *= -(kx * kx + ky * ky);
    }
    return inverse(s);
}

ScalarField curl(const VectorField& v) {
    if (v.dim() == 1) return ScalarField(v.grid());
    return derivative(v[1], 0) - derivative(v[0], 1);
}

ScalarField dealias(const ScalarField& f) {
    Spectrum s = forward(f);
    const GridSpec& g = f.grid();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool cut_x = 3 * std::abs(s.jx(i)) > g.nx;
        const bool cut_y = g.dim == 2 && 3 * std::abs(s.jy(i)) > g.ny;
        if (cut_x || cut_y) s[i] = 0.0;
    }
    return inverse(s);
}

VectorField dealias(const VectorField& v) {
    std::vector<ScalarField> c;
    for (int a = 0; a < v.dim(); ++a) c.push_back(dealias(v[a]));
    return VectorField(std::move(c));
}

ScalarField potential_from_gradient(const VectorField& v) {
    const double scale = v.max_abs();
    for (double m : v.mean())
        if (std::abs(m) > 1e-9 * scale + 1e-14)
            throw InvalidArgument("gradient field has a nonzero mean; no periodic potential exists");
    Spectrum p(v.grid());
    std::vector<Spectrum> comps;
    for (int a = 0; a < v.dim(); ++a) comps.push_back(forward(v[a]));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Wavevector k = p.wavevector(i);
        const double kx = p.nyquist_x(i) ? 0.0 : k.kx;
        const double ky = p.nyquist_y(i) ? 0.0 : k.ky;
        const double k2 = kx * kx + ky * ky;
        if (k2 == 0.0) continue;
        // p_k = -i (k . v_k) / |k|^2
        std::complex<double> kv = kx * comps[0][i];
        if (v.dim() == 2) kv += ky * comps[1][i];
        p[i] = std::complex<double>(0.0, -1.0) * kv / k2;
    }
    return inverse(p);
}

VectorField gradient_projection(const VectorField& v) {
    const int d = v.dim();
    std::vector<Spectrum> comps;
    for (int a = 0; a < d; ++a) comps.push_back(forward(v[a]));
    std::vector<Spectrum> out(static_cast<std::size_t>(d), Spectrum(v.grid()));
    for (std::size_t i = 0; i < comps[0].size(); ++i) {
        const Wavevector k = comps[0].wavevector(i);
        const double kk[2] = {comps[0].nyquist_x(i) ? 0.0 : k.kx,
                              comps[0].nyquist_y(i) ? 0.0 : k.ky};
        double k2 = 0.0;
        std::complex<double> kv = 0.0;
        for (int a = 0; a < d; ++a) {
            k2 += kk[a] * kk[a];
            kv += kk[a] * comps[static_cast<std::size_t>(a)][i];
        }
        if (k2 == 0.0) continue;
        for (int a = 0; a < d; ++a) out[static_cast<std::size_t>(a)][i] = kk[a] * kv / k2;
    }
    std::vector<ScalarField> c;
    for (const auto& s : out) c.push_back(inverse(s));
    return VectorField(std::move(c));
}

double sobolev_norm(const ScalarField& f, double s) {
    const Spectrum sp = forward(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const double k = sp.wavevector(i).norm();
        acc += sp.multiplicity(i) * std::pow(1.0 + k * k, s) * std::norm(sp[i]);
    }
    return std::sqrt(acc * f.grid().volume());
}

double sobolev_norm(const VectorField& v, double s) {
    double acc = 0.0;
    for (int a = 0; a < v.dim(); ++a) {
        const double n = sobolev_norm(v[a], s);
        acc += n * n;
    }
    return std::sqrt(acc);
}

ScalarField translate(const ScalarField& f, int shift_x, int shift_y) {
    const GridSpec& g = f.grid();
    ScalarField out(g);
    const int sx = ((shift_x % g.nx) + g.nx) % g.nx;
    const int sy = ((shift_y % g.ny) + g.ny) % g.ny;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t dst = static_cast<std::size_t>((j + sy) % g.ny) * g.nx + (i + sx) % g.nx;
            out[dst] = f[static_cast<std::size_t>(j) * g.nx + i];
        }
    return out;
}

VectorField translate(const VectorField& v, int shift_x, int shift_y) {
    std::vector<ScalarField> c;
    for (int a = 0; a < v.dim(); ++a) c.push_back(translate(v[a], shift_x, shift_y));
    return VectorField(std::move(c));
}

}  // namespace stratwave
