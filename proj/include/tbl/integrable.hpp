#pragma once

#include <optional>
#include <vector>

#include "tbl/drhp.hpp"

namespace tbl {

/// The pair a(L,s) = sqrt(Q(s+1)Q(s-1))/Q(s) and b(L,s) = d/dL log(Q(s)/Q(s-1)),
/// the latter carried through both of its routes (finite difference on the
/// determinant, and -2(alpha(s)-alpha(s-1))/L from two RH solves).
struct FrakPair {
  double L = 0.0;
  HalfInt s{1};
  double a_frak = 1.0;
  double b_frak = 0.0;     // RH route
  double b_frak_fd = 0.0;  // finite-difference route
  double b_gap = 0.0;
};

/// |d2/dL2 log Q + (1/L) d/dL log Q + 4 - 4 Q(s+1)Q(s-1)/Q(s)^2| with
/// five-point stencils at step h.
double toda_residual(double L, HalfInt s, const SigmaProfile& sigma, double h,
                     double eps = 1e-12);

struct SmallLFit {
  double fitted = 0.0;
  double expected = 0.0;
  std::vector<double> deviations;  // |(log Q - log Q0)/L^2 - expected| per L
};

/// Fits (log Q(L,s) - log Q0(s))/L^2 = c + d L^2 over a decreasing L list and
/// compares c with -(sigma(-s)-sigma(-s-1))/(1-sigma(-s-1)).
SmallLFit small_l_check(HalfInt s, const SigmaProfile& sigma, const std::vector<double>& L_list,
                        double eps = 1e-13);

FrakPair frak_ab(double L, HalfInt s, const SigmaProfile& sigma, double eps = 1e-12,
                 double h = 1e-3, std::int64_t N = 0);

/// Wavefunction values phi(l; L, s) on a rectangle of (l, s), built from one RH
/// solve per s-column (plus one extra column for the beta(s+1) prefactor).
class PhiTable {
 public:
  PhiTable(double L, const SigmaProfile& sigma, HalfInt s_lo, HalfInt s_hi, HalfInt l_lo,
           HalfInt l_hi, std::int64_t N = 0, double eps = 1e-12);

  double L() const { return L_; }
  HalfInt s_lo() const { return s_lo_; }
  HalfInt s_hi() const { return s_hi_; }
  HalfInt l_lo() const { return l_lo_; }
  HalfInt l_hi() const { return l_hi_; }

  double at(HalfInt l, HalfInt s) const;
  /// alpha/beta from the underlying solve at column s (s_lo <= s <= s_hi + 1).
  double alpha(HalfInt s) const;
  double beta(HalfInt s) const;
  /// b(L,s+1) = -2 (alpha(s+1) - alpha(s)) / L from the stored columns.
  double b_of(HalfInt s_plus_1) const;

  /// max over interior (l,s) of the three-term recursion residual, using
  /// a from the Fredholm route.
  double recursion_residual_max(const SigmaProfile& sigma, double eps = 1e-12) const;

 private:
  double L_;
  HalfInt s_lo_, s_hi_, l_lo_, l_hi_;
  Eigen::MatrixXd values_;               // (l index, s index)
  std::vector<double> alphas_, betas_;   // per s column, s_lo .. s_hi+1
};

struct IdpiiReport {
  double res_a_sum = 0.0;
  double res_b_sum = 0.0;
  double res_recursion = 0.0;
  double sum_tail_bound = 0.0;  // certified bound on the neglected part of the l sums
};

/// Residuals of the nonlocal recursion identities: the sum formulas for
/// a^{-1}-a and b(s+1), and the three-term recursion up to l_cut.
IdpiiReport verify_idpii(double L, HalfInt s, const SigmaProfile& sigma, const PhiTable& phi,
                         HalfInt l_cut, double eps = 1e-12);

/// v(L,s) from the discrete Painleve II recursion with Bessel-I initial data,
/// cross-checked at every step against the Fredholm ratio (indicator profile).
struct PainleveSequence {
  double L = 0.0;
  HalfInt s_first{-1};                // always -1/2
  std::vector<double> v;              // v[i] at s = s_first + i
  std::vector<double> cross_check;    // |1 - v^2 - Q(s+1)Q(s-1)/Q(s)^2| per s
  std::optional<HalfInt> blowup;      // first s where the cross-check exceeded 1e-6

  double at(HalfInt s) const;
  HalfInt s_last() const { return s_first + static_cast<std::int64_t>(v.size()) - 1; }
};

PainleveSequence dpii_sequence(double L, HalfInt s_max, double eps = 1e-12);

struct VolterraReport {
  double volterra = 0.0;   // |dL v - (1-v^2)(v(s+1)-v(s-1))|
  double relation_a = 0.0; // |dL a - (a/2)(b(s+1)-b(s))|
  double relation_b = 0.0; // |dL b - 4(a^2(s)-a^2(s-1)) + b(s)/L|
};

VolterraReport volterra_residual(double L, HalfInt s, const PainleveSequence& seq, double h,
                                 double eps = 1e-12);

}  // namespace tbl
