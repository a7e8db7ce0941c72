#pragma once

#include <Eigen/Dense>

namespace stratwave::detail {

// Gauss-Lobatto points cos(pi j/(n-1)) on [-1, 1], descending from 1.
Eigen::VectorXd chebyshev_nodes(int n);

// Collocation differentiation matrix on the nodes above.
Eigen::MatrixXd chebyshev_diff(int n);

// Clenshaw-Curtis weights on the nodes above (sum to 2).
Eigen::VectorXd clenshaw_curtis(int n);

// Periodic first-derivative matrix on n equispaced points of a period l.
// The Nyquist mode is annihilated, matching the spectral derivative.
Eigen::MatrixXd fourier_diff(int n, double l);

}  // namespace stratwave::detail
