#include "stratwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stratwave/errors.hpp"

namespace stratwave {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_extent(int n, double l, const char* axis) {
    if (n < 8 || !power_of_two(n))
        throw InvalidArgument(std::string("grid points along ") + axis +
                              " must be a power of two >= 8");
    if (!(l > 0.0) || !std::isfinite(l))
        throw InvalidArgument(std::string("period along ") + axis + " must be positive");
}

}  // namespace

GridSpec GridSpec::line(int nx, double lx) {
    check_extent(nx, lx, "x");
    return GridSpec{1, nx, 1, lx, 0.0};
}

GridSpec GridSpec::plane(int nx, int ny, double lx, double ly) {
    check_extent(nx, lx, "x");
    check_extent(ny, ly, "y");
    return GridSpec{2, nx, ny, lx, ly};
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (a != b) throw ShapeMismatch(std::string(what) + ": fields live on different grids");
}

ScalarField::ScalarField(const GridSpec& grid, double value)
    : grid_(grid), v_(grid.size(), value) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), v_(std::move(values)) {
    if (v_.size() != grid_.size()) throw InvalidArgument("sample count does not match grid");
    if (!all_finite()) throw InvalidArgument("field samples must be finite");
}

ScalarField ScalarField::from_function(const GridSpec& grid,
                                       const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            out.v_[static_cast<std::size_t>(j) * grid.nx + i] = f(grid.x(i), grid.y(j));
    if (!out.all_finite()) throw InvalidArgument("field samples must be finite");
    return out;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double v : v_) s += v;
    return v_.empty() ? 0.0 : s / static_cast<double>(v_.size());
}

double ScalarField::integral() const { return mean() * grid_.volume(); }

double ScalarField::min() const { return *std::min_element(v_.begin(), v_.end()); }
double ScalarField::max() const { return *std::max_element(v_.begin(), v_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : v_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::l2_norm() const {
    double s = 0.0;
    for (double v : v_) s += v * v;
    return std::sqrt(s * grid_.cell_area());
}

bool ScalarField::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "operator+=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "operator-=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_, "operator*=");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] *= o.v_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : v_) v *= s;
    return *this;
}

ScalarField& ScalarField::operator+=(double s) {
    for (double& v : v_) v += s;
    return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& x) {
    require_same_grid(grid_, x.grid_, "axpy");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += a * x.v_[i];
    return *this;
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
    ScalarField out = *this;
    for (double& v : out.v_) v = f(v);
    return out;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator+(ScalarField a, double s) { return a += s; }
ScalarField operator+(double s, ScalarField a) { return a += s; }
ScalarField operator-(double s, ScalarField a) { return (a *= -1.0) += s; }
ScalarField operator-(ScalarField a, double s) { return a += -s; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }

ScalarField operator/(ScalarField a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "operator/");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] /= b[i];
    return a;
}

VectorField::VectorField(const GridSpec& grid)
    : grid_(grid), c_(static_cast<std::size_t>(grid.dim), ScalarField(grid)) {}

VectorField::VectorField(std::vector<ScalarField> components) : c_(std::move(components)) {
    if (c_.empty()) throw InvalidArgument("vector field needs components");
    grid_ = c_.front().grid();
    if (static_cast<int>(c_.size()) != grid_.dim)
        throw InvalidArgument("component count must equal grid dimension");
    for (const auto& c : c_) require_same_grid(grid_, c.grid(), "VectorField");
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, c.max_abs());
    return m;
}

double VectorField::l2_norm() const {
    double s = 0.0;
    for (const auto& c : c_) s += c.l2_norm() * c.l2_norm();
    return std::sqrt(s);
}

bool VectorField::all_finite() const {
    return std::all_of(c_.begin(), c_.end(), [](const ScalarField& c) { return c.all_finite(); });
}

std::vector<double> VectorField::mean() const {
    std::vector<double> m;
    for (const auto& c : c_) m.push_back(c.mean());
    return m;
}

VectorField& VectorField::operator+=(const VectorField& o) {
    require_same_grid(grid_, o.grid_, "operator+=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    require_same_grid(grid_, o.grid_, "operator-=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

VectorField& VectorField::operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
}

VectorField& VectorField::operator*=(const ScalarField& s) {
    for (auto& c : c_) c *= s;
    return *this;
}

VectorField& VectorField::axpy(double a, const VectorField& x) {
    require_same_grid(grid_, x.grid_, "axpy");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i].axpy(a, x.c_[i]);
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }
VectorField operator*(VectorField a, double s) { return a *= s; }
VectorField operator*(const ScalarField& s, VectorField a) { return a *= s; }
VectorField operator-(VectorField a) { return a *= -1.0; }

ScalarField dot(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "dot");
    ScalarField out(a.grid());
    for (int i = 0; i < a.dim(); ++i) out += a[i] * b[i];
    return out;
}

ScalarField norm_squared(const VectorField& a) { return dot(a, a); }

}  // namespace stratwave
