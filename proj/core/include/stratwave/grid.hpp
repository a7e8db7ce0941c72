#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace stratwave {

// Periodic grid on [0, lx), times [0, ly) in 2D. Samples are stored with x fastest.
struct GridSpec {
    int dim = 1;
    int nx = 0;
    int ny = 1;
    double lx = 0.0;
    double ly = 0.0;

    static GridSpec line(int nx, double lx);
    static GridSpec plane(int nx, int ny, double lx, double ly);

    std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * ny; }
    double dx() const noexcept { return lx / nx; }
    double dy() const noexcept { return dim == 2 ? ly / ny : 1.0; }
    double x(int i) const noexcept { return i * dx(); }
    double y(int j) const noexcept { return dim == 2 ? j * dy() : 0.0; }
    double cell_area() const noexcept { return dx() * dy(); }
    double volume() const noexcept { return dim == 2 ? lx * ly : lx; }

    bool operator==(const GridSpec& o) const noexcept {
        return dim == o.dim && nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
    bool operator!=(const GridSpec& o) const noexcept { return !(*this == o); }
};

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid, double value = 0.0);
    // Throws InvalidArgument on size mismatch or non-finite samples.
    ScalarField(const GridSpec& grid, std::vector<double> values);

    static ScalarField from_function(const GridSpec& grid,
                                     const std::function<double(double, double)>& f);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    const std::vector<double>& values() const noexcept { return v_; }
    std::vector<double>& values() noexcept { return v_; }
    const double* data() const noexcept { return v_.data(); }
    double* data() noexcept { return v_.data(); }

    double mean() const;
    double integral() const;
    double min() const;
    double max() const;
    double max_abs() const;
    double l2_norm() const;  // sqrt of the torus integral of f^2
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(const ScalarField& o);
    ScalarField& operator*=(double s);
    ScalarField& operator+=(double s);
    ScalarField& axpy(double a, const ScalarField& x);  // this += a*x

    ScalarField map(const std::function<double(double)>& f) const;

private:
    GridSpec grid_;
    std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator*(ScalarField a, double s);
ScalarField operator+(ScalarField a, double s);
ScalarField operator+(double s, ScalarField a);
ScalarField operator-(double s, ScalarField a);
ScalarField operator-(ScalarField a, double s);
ScalarField operator-(ScalarField a);
ScalarField operator/(ScalarField a, const ScalarField& b);

class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const GridSpec& grid);
    // Component count must equal grid.dim.
    explicit VectorField(std::vector<ScalarField> components);

    const GridSpec& grid() const noexcept { return grid_; }
    int dim() const noexcept { return static_cast<int>(c_.size()); }
    const ScalarField& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    ScalarField& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    double max_abs() const;
    double l2_norm() const;
    bool all_finite() const;
    std::vector<double> mean() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double s);
    VectorField& operator*=(const ScalarField& s);
    VectorField& axpy(double a, const VectorField& x);

private:
    GridSpec grid_;
    std::vector<ScalarField> c_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);
VectorField operator*(VectorField a, double s);
VectorField operator*(const ScalarField& s, VectorField a);
VectorField operator-(VectorField a);

ScalarField dot(const VectorField& a, const VectorField& b);
ScalarField norm_squared(const VectorField& a);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace stratwave
