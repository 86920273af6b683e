#pragma once

#include <vector>

#include <Eigen/Dense>

namespace tbl {

/// First derivative from five equispaced samples f(x-2h)..f(x+2h), O(h^4).
inline double five_point_d1(const double f[5], double h) {
  return (-f[4] + 8.0 * f[3] - 8.0 * f[1] + f[0]) / (12.0 * h);
}

/// Second derivative from the same stencil, O(h^4).
inline double five_point_d2(const double f[5], double h) {
  return (-f[4] + 16.0 * f[3] - 30.0 * f[2] + 16.0 * f[1] - f[0]) / (12.0 * h * h);
}

/// Fornberg weights for the m-th derivative at z from arbitrary distinct nodes.
Eigen::VectorXd fd_weights(double z, const std::vector<double>& nodes, int m);

}  // namespace tbl
