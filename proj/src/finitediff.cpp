#include "tbl/finitediff.hpp"

#include "tbl/errors.hpp"

namespace tbl {

// Fornberg's recursion (Math. Comp. 51, 1988)
Eigen::VectorXd fd_weights(double z, const std::vector<double>& nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  if (n <= m) throw config_error("fd_weights: need more nodes than the derivative order");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m + 1, n);
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  w(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          w(k, i) = c1 * (k * w(k - 1, i - 1) - c5 * w(k, i - 1)) / c2;
        w(0, i) = -c1 * c5 * w(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) w(k, j) = (c4 * w(k, j) - k * w(k - 1, j)) / c3;
      w(0, j) = c4 * w(0, j) / c3;
    }
    c1 = c2;
  }
  return w.row(m);
}

}  // namespace tbl
