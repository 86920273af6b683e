#pragma once

#include <vector>

#include "tbl/errors.hpp"

namespace tbl {

/// Bessel J_n(x) for all integer orders |n| <= n_max at a fixed argument,
/// with a per-entry absolute error bound. Negative orders hold the exact
/// symmetry J_{-n} = (-1)^n J_n by construction.
struct BesselRow {
  double x = 0.0;
  int n_max = 0;
  std::vector<double> values;  // index n + n_max
  double eps = 0.0;

  double at(int n) const {
    const int k = n + n_max;
    if (k < 0 || k >= static_cast<int>(values.size()))
      throw resource_limit_error("BesselRow: order " + std::to_string(n) + " outside |n| <= " +
                                 std::to_string(n_max));
    return values[static_cast<std::size_t>(k)];
  }
};

/// J_n(x) for |n| <= n_max by backward (Miller) recurrence normalized with the
/// even-order sum identity. Each entry is within eps of the true value.
BesselRow bessel_j_row(double x, int n_max, double eps = 1e-14);

/// Modified Bessel I_n(x) by its ascending series (all terms positive).
/// At least 1e-13 relative accuracy for x <= 50, n <= 200.
double bessel_i(int n, double x);

/// B(x,k) = (x/2)^k / k!, a rigorous bound for |J_{+-k}(x)|, evaluated in
/// log space. Monotone decreasing in k once k > x/2.
double bessel_tail_bound(double x, int k);

/// log B(x,k); handy when the bound itself underflows.
double log_bessel_tail_bound(double x, int k);

}  // namespace tbl
