#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tbl/fredholm.hpp"

namespace tbl {

/// Solved discrete Riemann-Hilbert data for Y(z) = I + sum_b r(b) ghat(b)^T / (z-b):
/// residue vectors, the hatted data they were built from, and the 1/z expansion
/// coefficients alpha, beta, gamma read off the exact residue sum.
struct RHSolution {
  double L = 0.0;
  HalfInt s{1};
  std::string sigma_id;
  HalfInt lo{1}, hi{-1};
  std::vector<Eigen::Vector2d> fhat, ghat, r;
  Eigen::VectorXd m_diag;  // M_s(a,a) on the window
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double solver_residual = 0.0;
  double cond_proxy = 1.0;
  BesselRow row;            // wide enough for kernel evaluations against the window
  double kernel_eps = 1e-14;  // series budget the row was sized for

  std::int64_t size() const { return (hi - lo) + 1; }
  std::int64_t index(HalfInt a) const { return a - lo; }
  bool in_window(HalfInt a) const { return lo <= a && a <= hi; }

  /// Residue of Y at a window point, the rank-one matrix r(a) ghat(a)^T.
  Eigen::Matrix2d residue(HalfInt a) const;

  std::string to_json() const;
};

/// Matrix of the operator (Dr)(a) = sum_{b != a} r(b) ghat(b)^T fhat(a) / (a-b)
/// acting on 2-vector fields over the window Z' cap [s+1-N, s+N], stacked as
/// (r(a_0), r(a_1), ...) in R^{2 window}.
Eigen::MatrixXd build_D(double L, HalfInt s, const SigmaProfile& sigma, std::int64_t N,
                        double eps = 1e-12);

/// N wide enough that both the sigma left tail and the Bessel right decay are
/// certified below eps for the (L,s) window.
std::int64_t rh_auto_N(double L, HalfInt s, const SigmaProfile& sigma, double eps = 1e-12);

/// Direct dense solve of (1-D) r = fhat. `order_margin` widens the stored
/// Bessel row so that later wavefunction evaluations at |l| up to the margin
/// stay inside it. Throws degenerate_determinant_error when the windowed
/// system is numerically singular (condition proxy above 1e12).
RHSolution solve_rhp(double L, HalfInt s, const SigmaProfile& sigma, std::int64_t N,
                     double eps = 1e-12, std::int64_t order_margin = 0);

/// Neumann-series solve r = sum_k D^k fhat; converges only for ||D|| < 1
/// (small L). A validator for the direct route, not the production path.
RHSolution solve_rhp_neumann(double L, HalfInt s, const SigmaProfile& sigma, std::int64_t N,
                             double eps = 1e-12, int max_iter = 400);

/// Y(z) away from the window lattice. On-lattice z raises
/// pole_evaluation_error; use residue() or chi() for the regularized data.
Eigen::Matrix2cd eval_Y(const RHSolution& sol, std::complex<double> z);

/// chi(l; L, s) = [Y(w) Phi_1(w)]_2 at w = l+s+1/2, where Phi_1 is the Bessel
/// column (J_{w-1/2}, L J_{w+1/2})^T. The product is regular on the lattice:
/// the b = w term of the residue sum carries K(w,w)/(1 - M_s(w,w)) with the
/// diagonal kernel value from its series.
double chi_wavefunction(const RHSolution& sol, HalfInt l, double eps = 1e-12);

struct VariationalReport {
  double res_beta = 0.0;
  double res_alpha = 0.0;
  double res_det_relation = 0.0;
};

/// Residuals of the variational formulas: beta against the Fredholm ratio,
/// -2 alpha / L against a five-point dL of log Q at step h, and the
/// determinant relation (1+beta(s+1))(L^2+gamma(s)) = L^2.
VariationalReport verify_variational(double L, HalfInt s, const SigmaProfile& sigma,
                                     std::int64_t N, double h, double eps = 1e-12);

}  // namespace tbl
