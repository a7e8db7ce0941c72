#include "chebyshev.hpp"

#include <cmath>
#include <numbers>

namespace stratwave::detail {

using std::numbers::pi;

Eigen::VectorXd chebyshev_nodes(int n) {
    Eigen::VectorXd x(n);
    const int m = n - 1;
    for (int j = 0; j < n; ++j) x(j) = std::sin(pi * (m - 2.0 * j) / (2.0 * m));
    return x;
}

Eigen::MatrixXd chebyshev_diff(int n) {
    const int m = n - 1;
    const Eigen::VectorXd x = chebyshev_nodes(n);
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = ((j == 0 || j == m) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) d(i, j) = (c(i) / c(j)) / (x(i) - x(j));
    // negative-sum trick for the diagonal
    for (int i = 0; i < n; ++i) d(i, i) = -d.row(i).sum();
    return d;
}

Eigen::VectorXd clenshaw_curtis(int n) {
    const int m = n - 1;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m - 1);
    auto theta = [&](int j) { return pi * j / m; };
    if (m % 2 == 0) {
        w(0) = w(m) = 1.0 / (m * m - 1.0);
        for (int k = 1; k < m / 2; ++k)
            for (int j = 1; j < m; ++j) v(j - 1) -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        for (int j = 1; j < m; ++j) v(j - 1) -= std::cos(m * theta(j)) / (m * m - 1.0);
    } else {
        w(0) = w(m) = 1.0 / (m * m);
        for (int k = 1; k <= (m - 1) / 2; ++k)
            for (int j = 1; j < m; ++j) v(j - 1) -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
    }
    for (int j = 1; j < m; ++j) w(j) = 2.0 * v(j - 1) / m;
    return w;
}

Eigen::MatrixXd fourier_diff(int n, double l) {
    const double h = 2.0 * pi / n;
    const double scale = 2.0 * pi / l;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int k = i - j;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = scale * 0.5 * sign / std::tan(k * h / 2.0);
        }
    return d;
}

}  // namespace stratwave::detail
