#pragma once

#include <Eigen/Dense>

#include "tbl/halfint.hpp"
#include "tbl/sigma.hpp"
#include "tbl/specfun.hpp"

namespace tbl {

/// Finite window of a symmetric kernel on Z' x Z' with the certified bound on
/// the trace of the discarded diagonal.
struct KernelMatrix {
  HalfInt lo{1};
  HalfInt hi{-1};  // hi < lo encodes the empty window
  Eigen::MatrixXd entries;
  double trunc_err = 0.0;

  bool empty() const { return hi < lo; }
  Eigen::Index size() const { return empty() ? 0 : (hi - lo) + 1; }
  Eigen::Index index(HalfInt a) const { return a - lo; }
  HalfInt point(Eigen::Index i) const { return lo + static_cast<std::int64_t>(i); }
};

/// Discrete Bessel kernel K(a,b) at parameter L, within eps.
///
/// Off-diagonal entries are evaluated through both routes the kernel admits,
/// the Christoffel-Darboux-type closed form
///     L (J_{a-1/2} J_{b+1/2} - J_{a+1/2} J_{b-1/2}) / (a - b)
/// and the series sum_{l in Z'_+} J_{a+l} J_{b+l}; the two must agree within
/// 10 eps (a consistency_error otherwise). Diagonal entries come from the
/// series alone.
double kernel_bessel(HalfInt a, HalfInt b, double L, double eps = 1e-12);

/// Finite-temperature kernel sum_{l in Z'} sigma(l) J_{a+l}(2L) J_{b+l}(2L),
/// truncated symmetrically with both tails certified <= eps through the
/// Bessel bound (sigma <= 1 suffices).
double kernel_finite_temp(HalfInt a, HalfInt b, double L, const SigmaProfile& sigma,
                          double eps = 1e-12);

/// Window of M_s(a,b) = sqrt(sigma(a-s-1/2)) K(a,b) sqrt(sigma(b-s-1/2)) whose
/// discarded diagonal trace is certified <= eps on each side. For the
/// indicator profile the left edge is exactly a = s + 1.
KernelMatrix build_M(HalfInt s, double L, const SigmaProfile& sigma, double eps = 1e-12);

namespace detail {

/// Row wide enough to evaluate kernel entries on [lo,hi] including diagonal
/// series and the certified remainder.
BesselRow kernel_row(double L, HalfInt lo, HalfInt hi, double eps);

/// K(a,b) from a prepared row (both routes off-diagonal, series on the
/// diagonal). The row must cover the orders the series needs.
double kernel_bessel_row(HalfInt a, HalfInt b, double L, const BesselRow& row, double eps);

/// Certified upper bound for the discarded diagonal sum
/// sum_{a > hi} K(a,a) = sum_{k >= hi+3/2} (k - hi - 1/2) J_k(2L)^2.
double right_diag_tail_bound(double L, HalfInt hi);

/// Smallest hi with right_diag_tail_bound(L,hi) <= eps, scanning from `from`.
HalfInt right_diag_cut(double L, HalfInt from, double eps, std::int64_t cap = 200000);

}  // namespace detail

}  // namespace tbl
