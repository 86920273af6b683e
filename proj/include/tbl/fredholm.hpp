#pragma once

#include <optional>
#include <string>

#include "tbl/kernels.hpp"

namespace tbl {

/// Q_sigma(L,s) with its certificate. `q` carries the point value; when the
/// determinant sits below the certified floor the result is the interval
/// [0, floor] (at_floor set, q clamped into it) rather than a point claim.
struct GapResult {
  double L = 0.0;
  HalfInt s{1};
  double q = 1.0;
  double log_q = 0.0;  // meaningless when at_floor
  double trunc_err = 0.0;
  double floor = 0.0;
  bool at_floor = false;
  HalfInt window_lo{1};
  HalfInt window_hi{-1};
};

/// det(1 - M_s) over the certified window, by dense LU with the log-determinant
/// accumulated from the pivots.
GapResult gap_probability(double L, HalfInt s, const SigmaProfile& sigma, double eps = 1e-12);

/// Drops every memoized determinant (the cache is keyed on sigma id, L bits,
/// s, and eps; values are deterministic so last-writer-wins is safe).
void clear_gap_cache();

/// Q^0_sigma(s) = prod_{i>=1} (1 - sigma(-i-s)), the L -> 0 limit.
struct QZeroResult {
  double value = 1.0;
  bool exact_zero = false;  // some factor vanished
  double trunc_err = 0.0;
};
QZeroResult q_zero(HalfInt s, const SigmaProfile& sigma, double eps = 1e-14);

/// Partial product prod_{i>=i_from} (1 - sigma(-i-s)); tail certified <= eps.
QZeroResult q_zero_from(HalfInt s, const SigmaProfile& sigma, std::int64_t i_from,
                        double eps = 1e-14);

/// | Q(L,s-1)/Q(L,s) - 1 - tr((1-M_s)^{-1} N_s) | with the rank-one N_s from
/// the shift comparison of the kernel. Requires Q(L,s) above its floor.
double ratio_identity_residual(double L, HalfInt s, const SigmaProfile& sigma,
                               double eps = 1e-12);

/// e^{-L^2} det[ I_{i-j}(2L) ]_{i,j=1..s+1/2} for s in Z'_+ (empty matrix at
/// s = -1/2 gives e^{-L^2}). The independent Toeplitz route to the
/// indicator-profile gap probability.
double toeplitz_q(double L, HalfInt s);

namespace detail {

/// gap probability with the window padded left/right by whole lattice steps,
/// for certificate self-consistency checks.
GapResult gap_probability_padded(double L, HalfInt s, const SigmaProfile& sigma, double eps,
                                 std::int64_t pad_left, std::int64_t pad_right);

}  // namespace detail

}  // namespace tbl
