#include "tbl/drhp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <json.hpp>

#include "tbl/finitediff.hpp"

namespace tbl {

namespace {

struct System {
  RHSolution sol;       // window, fhat/ghat/m_diag/row filled; r empty
  Eigen::MatrixXd D;    // 2n x 2n
  Eigen::VectorXd rhs;  // stacked fhat
};

System assemble(double L, HalfInt s, const SigmaProfile& sigma, std::int64_t N, double eps,
                std::int64_t order_margin) {
  if (!(L > 0.0)) throw config_error("drhp: L must be positive");
  if (N < 1) throw config_error("drhp: window radius N must be positive");

  System sys;
  RHSolution& sol = sys.sol;
  sol.L = L;
  sol.s = s;
  sol.sigma_id = sigma.id();
  sol.lo = (s + 1) - N;
  sol.hi = s + N;
  const std::int64_t n = sol.size();

  HalfInt wide_lo = sol.lo, wide_hi = sol.hi;
  if (order_margin > 0) {
    wide_lo = wide_lo - order_margin;
    wide_hi = wide_hi + order_margin;
  }
  sol.kernel_eps = std::min(1e-14, 0.01 * eps);
  sol.row = detail::kernel_row(L, wide_lo, wide_hi, sol.kernel_eps);

  sol.fhat.resize(n);
  sol.ghat.resize(n);
  sol.m_diag.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const HalfInt a = sol.lo + i;
    const int am = static_cast<int>((a.twice() - 1) / 2);
    const double sg = sigma(HalfInt(a.twice() - s.twice() - 1));
    const double jm = sol.row.at(am), jp = sol.row.at(am + 1);
    sol.m_diag[i] = sg * detail::kernel_bessel_row(a, a, L, sol.row, sol.kernel_eps);
    if (!(1.0 - sol.m_diag[i] > 0.0))
      throw consistency_error("drhp: 1 - M_s(a,a) not positive at a = " + a.str());
    sol.fhat[i] = sg * Eigen::Vector2d(jm, L * jp);
    sol.ghat[i] = Eigen::Vector2d(L * jp, -jm) / (1.0 - sol.m_diag[i]);
  }

  sys.D = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double c = sol.ghat[j].dot(sol.fhat[i]) / static_cast<double>(i - j);
      sys.D(2 * i, 2 * j) = c;
      sys.D(2 * i + 1, 2 * j + 1) = c;
    }
  }
  sys.rhs.resize(2 * n);
  for (std::int64_t i = 0; i < n; ++i) sys.rhs.segment<2>(2 * i) = sol.fhat[i];
  return sys;
}

void finish(RHSolution& sol, const Eigen::VectorXd& rvec, const Eigen::MatrixXd& D,
            const Eigen::VectorXd& rhs) {
  const std::int64_t n = sol.size();
  sol.r.resize(n);
  for (std::int64_t i = 0; i < n; ++i) sol.r[i] = rvec.segment<2>(2 * i);
  Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
  for (std::int64_t i = 0; i < n; ++i) sum += sol.r[i] * sol.ghat[i].transpose();
  sol.alpha = sum(0, 0);
  sol.beta = sum(0, 1);
  sol.gamma = sum(1, 0);
  sol.solver_residual =
      (rvec - D * rvec - rhs).norm() / std::max(1.0, rhs.norm());
}

}  // namespace

Eigen::Matrix2d RHSolution::residue(HalfInt a) const {
  if (!in_window(a)) return Eigen::Matrix2d::Zero();
  const std::int64_t i = index(a);
  return r[i] * ghat[i].transpose();
}

std::string RHSolution::to_json() const {
  nlohmann::json j;
  j["L"] = L;
  j["s"] = s.str();
  j["sigma"] = sigma_id;
  j["window"] = {lo.str(), hi.str()};
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["gamma"] = gamma;
  j["solver_residual"] = solver_residual;
  j["cond_proxy"] = cond_proxy;
  nlohmann::json res = nlohmann::json::array();
  for (std::int64_t i = 0; i < size(); ++i) {
    const HalfInt a = lo + i;
    res.push_back({{"a", a.str()},
                   {"r", {r[i][0], r[i][1]}},
                   {"ghat", {ghat[i][0], ghat[i][1]}}});
  }
  j["residues"] = res;
  return j.dump();
}

Eigen::MatrixXd build_D(double L, HalfInt s, const SigmaProfile& sigma, std::int64_t N,
                        double eps) {
  return assemble(L, s, sigma, N, eps, 0).D;
}

std::int64_t rh_auto_N(double L, HalfInt s, const SigmaProfile& sigma, double eps) {
  // left: fhat(a) ~ sigma(a-s-1/2) with |J| <= 1, so the sigma tail governs
  std::int64_t left = 1;
  if (sigma.kind() != SigmaProfile::Kind::indicator)
    left = std::llround(sigma.tail_cut(eps) + 0.5);
  // right: Bessel decay past the turning point
  const HalfInt hi = detail::right_diag_cut(L, std::max(s + 1, HalfInt::nearest(2.0 * L)), eps);
  const std::int64_t right = (hi - s) + 2;
  return std::max<std::int64_t>({8, left, right});
}

RHSolution solve_rhp(double L, HalfInt s, const SigmaProfile& sigma, std::int64_t N, double eps,
                     std::int64_t order_margin) {
  if (N <= 0) N = rh_auto_N(L, s, sigma, eps);
  System sys = assemble(L, s, sigma, N, eps, order_margin);
  const std::int64_t n2 = 2 * sys.sol.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n2, n2) - sys.D;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  sys.sol.cond_proxy = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(sys.sol.cond_proxy < 1e12))
    throw degenerate_determinant_error(
        "solve_rhp: 1 - D numerically singular at (L=" + std::to_string(L) + ", s=" + s.str() +
        "); Q at its error floor");
  finish(sys.sol, lu.solve(sys.rhs), sys.D, sys.rhs);
  return sys.sol;
}

RHSolution solve_rhp_neumann(double L, HalfInt s, const SigmaProfile& sigma, std::int64_t N,
                             double eps, int max_iter) {
  if (N <= 0) N = rh_auto_N(L, s, sigma, eps);
  System sys = assemble(L, s, sigma, N, eps, 0);
  Eigen::VectorXd r = sys.rhs, term = sys.rhs;
  const double scale = std::max(1.0, sys.rhs.norm());
  for (int k = 0; k < max_iter; ++k) {
    term = sys.D * term;
    r += term;
    if (term.norm() < 0.25 * eps * scale) {
      finish(sys.sol, r, sys.D, sys.rhs);
      return sys.sol;
    }
    if (term.norm() > 1e6 * scale)
      throw degenerate_determinant_error("solve_rhp_neumann: series diverges (||D|| >= 1)");
  }
  throw resource_limit_error("solve_rhp_neumann: no convergence within iteration cap");
}

Eigen::Matrix2cd eval_Y(const RHSolution& sol, std::complex<double> z) {
  const std::int64_t n = sol.size();
  for (std::int64_t i = 0; i < n; ++i) {
    const HalfInt b = sol.lo + i;
    if (std::abs(z - std::complex<double>(b.value(), 0.0)) < 1e-9)
      throw pole_evaluation_error("eval_Y: z = " + b.str() +
                                  " is a lattice pole; use residue() or chi_wavefunction()");
  }
  Eigen::Matrix2cd Y = Eigen::Matrix2cd::Identity();
  for (std::int64_t i = 0; i < n; ++i) {
    const HalfInt b = sol.lo + i;
    const Eigen::Matrix2d R = sol.r[i] * sol.ghat[i].transpose();
    Y += R.cast<std::complex<double>>() / (z - std::complex<double>(b.value(), 0.0));
  }
  return Y;
}

double chi_wavefunction(const RHSolution& sol, HalfInt l, double eps) {
  const double L = sol.L;
  eps = std::max(eps, sol.kernel_eps);  // the stored row covers exactly this budget
  const std::int64_t w2 = l.twice() + sol.s.twice() + 1;  // twice (l + s + 1/2)
  const HalfInt w(w2);
  const int wm = static_cast<int>((w2 - 1) / 2);  // order w - 1/2 = l + s

  double v = L * sol.row.at(wm + 1);  // [Phi_1(w)]_2 = L J_{l+s+1}(2L)
  const std::int64_t n = sol.size();
  for (std::int64_t i = 0; i < n; ++i) {
    const HalfInt b = sol.lo + i;
    const double K = detail::kernel_bessel_row(w, b, L, sol.row, std::max(eps, sol.kernel_eps));
    v += sol.r[i][1] * K / (1.0 - sol.m_diag[i]);
  }
  return v;
}

VariationalReport verify_variational(double L, HalfInt s, const SigmaProfile& sigma,
                                     std::int64_t N, double h, double eps) {
  const RHSolution sol = solve_rhp(L, s, sigma, N, eps);
  const RHSolution sol1 = solve_rhp(L, s + 1, sigma, N, eps);

  const GapResult qs = gap_probability(L, s, sigma, eps);
  if (qs.at_floor) throw degenerate_determinant_error("verify_variational: Q(s) at error floor");
  double ratio;
  if (sigma.kind() == SigmaProfile::Kind::indicator && s.twice() - 2 < -1) {
    ratio = 0.0;  // Q vanishes identically below -1/2 for the indicator
  } else {
    const GapResult qm = gap_probability(L, s - 1, sigma, eps);
    if (qm.at_floor)
      throw degenerate_determinant_error("verify_variational: Q(s-1) at error floor");
    ratio = qm.q / qs.q;
  }

  VariationalReport rep;
  rep.res_beta = std::fabs(ratio - 1.0 - sol.beta);

  double logq[5];
  for (int k = -2; k <= 2; ++k) {
    const GapResult g = gap_probability(L + k * h, s, sigma, eps);
    if (g.at_floor) throw degenerate_determinant_error("verify_variational: Q(L+kh) at floor");
    logq[k + 2] = g.log_q;
  }
  const double dlog = five_point_d1(logq, h);
  rep.res_alpha = std::fabs(dlog + 2.0 * sol.alpha / L);

  rep.res_det_relation = std::fabs((1.0 + sol1.beta) * (L * L + sol.gamma) - L * L);
  return rep;
}

}  // namespace tbl
