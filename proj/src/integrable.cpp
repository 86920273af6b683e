#include "tbl/integrable.hpp"

#include <algorithm>
#include <cmath>

#include "tbl/finitediff.hpp"

namespace tbl {

namespace {

double log_q_checked(double L, HalfInt s, const SigmaProfile& sigma, double eps,
                     const char* who) {
  const GapResult g = gap_probability(L, s, sigma, eps);
  if (g.at_floor)
    throw degenerate_determinant_error(std::string(who) + ": Q(L=" + std::to_string(L) +
                                       ", s=" + s.str() + ") at error floor");
  return g.log_q;
}

double q_checked(double L, HalfInt s, const SigmaProfile& sigma, double eps, const char* who) {
  const GapResult g = gap_probability(L, s, sigma, eps);
  if (g.at_floor)
    throw degenerate_determinant_error(std::string(who) + ": Q(L=" + std::to_string(L) +
                                       ", s=" + s.str() + ") at error floor");
  return g.q;
}

// the indicator process has no particle below -1/2, so Q vanishes identically
// there; everywhere else a floor hit is an error
double q_or_exact_zero(double L, HalfInt s, const SigmaProfile& sigma, double eps,
                       const char* who) {
  if (sigma.kind() == SigmaProfile::Kind::indicator && s.twice() < -1) return 0.0;
  return q_checked(L, s, sigma, eps, who);
}

}  // namespace

double toda_residual(double L, HalfInt s, const SigmaProfile& sigma, double h, double eps) {
  if (!(h > 0.0) || L - 2.0 * h <= 0.0)
    throw config_error("toda_residual: need 0 < 2h < L");
  double f[5];
  for (int k = -2; k <= 2; ++k) f[k + 2] = log_q_checked(L + k * h, s, sigma, eps, "toda");
  const double d1 = five_point_d1(f, h);
  const double d2 = five_point_d2(f, h);
  const double qp = q_or_exact_zero(L, s + 1, sigma, eps, "toda");
  const double qm = q_or_exact_zero(L, s - 1, sigma, eps, "toda");
  const double q0 = q_checked(L, s, sigma, eps, "toda");
  return std::fabs(d2 + d1 / L + 4.0 - 4.0 * qp * qm / (q0 * q0));
}

SmallLFit small_l_check(HalfInt s, const SigmaProfile& sigma, const std::vector<double>& L_list,
                        double eps) {
  if (L_list.size() < 2) throw config_error("small_l_check: need at least two L values");
  const QZeroResult q0 = q_zero(s, sigma);
  if (q0.exact_zero || q0.value <= 0.0)
    throw degenerate_determinant_error("small_l_check: Q0(s) = 0, point unsupported");
  const double log_q0 = std::log(q0.value);

  SmallLFit fit;
  const double sm = sigma(-s), sm1 = sigma(HalfInt(-s.twice() - 2));
  fit.expected = -(sm - sm1) / (1.0 - sm1);

  const int n = static_cast<int>(L_list.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double L = L_list[i];
    const double g = (log_q_checked(L, s, sigma, eps, "small_l_check") - log_q0) / (L * L);
    A(i, 0) = 1.0;
    A(i, 1) = L * L;
    y[i] = g;
    fit.deviations.push_back(std::fabs(g - fit.expected));
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  fit.fitted = c[0];
  return fit;
}

FrakPair frak_ab(double L, HalfInt s, const SigmaProfile& sigma, double eps, double h,
                 std::int64_t N) {
  FrakPair out;
  out.L = L;
  out.s = s;
  const double qp = q_checked(L, s + 1, sigma, eps, "frak_ab");
  const double q0 = q_checked(L, s, sigma, eps, "frak_ab");
  const double qm = q_checked(L, s - 1, sigma, eps, "frak_ab");
  out.a_frak = std::sqrt(qp * qm) / q0;

  const RHSolution sol = solve_rhp(L, s, sigma, N, eps);
  const RHSolution solm = solve_rhp(L, s - 1, sigma, N, eps);
  out.b_frak = -2.0 * (sol.alpha - solm.alpha) / L;

  double g[5];
  for (int k = -2; k <= 2; ++k)
    g[k + 2] = log_q_checked(L + k * h, s, sigma, eps, "frak_ab") -
               log_q_checked(L + k * h, s - 1, sigma, eps, "frak_ab");
  out.b_frak_fd = five_point_d1(g, h);
  out.b_gap = std::fabs(out.b_frak - out.b_frak_fd);
  return out;
}

PhiTable::PhiTable(double L, const SigmaProfile& sigma, HalfInt s_lo, HalfInt s_hi, HalfInt l_lo,
                   HalfInt l_hi, std::int64_t N, double eps)
    : L_(L), s_lo_(s_lo), s_hi_(s_hi), l_lo_(l_lo), l_hi_(l_hi) {
  if (s_hi < s_lo || l_hi < l_lo) throw config_error("PhiTable: empty range");
  const std::int64_t ns = (s_hi - s_lo) + 2;  // one extra column for beta(s+1)
  const std::int64_t nl = (l_hi - l_lo) + 1;
  values_.resize(nl, ns - 1);
  alphas_.resize(ns);
  betas_.resize(ns);

  // the wavefunction argument w = l+s+1/2 must stay inside the solve's row
  const std::int64_t margin =
      std::max(std::llabs(l_lo.twice()), std::llabs(l_hi.twice())) / 2 + 2;

  std::vector<RHSolution> sols;
  sols.reserve(ns);
  for (std::int64_t k = 0; k < ns; ++k)
    sols.push_back(solve_rhp(L, s_lo + k, sigma, N, eps, margin));
  for (std::int64_t k = 0; k < ns; ++k) {
    alphas_[k] = sols[k].alpha;
    betas_[k] = sols[k].beta;
  }
  for (std::int64_t k = 0; k + 1 < ns; ++k) {
    const double pref = std::sqrt((1.0 + betas_[k + 1]) / L);
    for (std::int64_t i = 0; i < nl; ++i)
      values_(i, k) = pref * chi_wavefunction(sols[k], l_lo + i, eps);
  }
}

double PhiTable::at(HalfInt l, HalfInt s) const {
  if (l < l_lo_ || l_hi_ < l || s < s_lo_ || s_hi_ < s)
    throw config_error("PhiTable: (" + l.str() + "," + s.str() + ") outside the table");
  return values_(l - l_lo_, s - s_lo_);
}

double PhiTable::alpha(HalfInt s) const {
  const std::int64_t k = s - s_lo_;
  if (k < 0 || k >= static_cast<std::int64_t>(alphas_.size()))
    throw config_error("PhiTable: alpha(" + s.str() + ") outside the table");
  return alphas_[k];
}

double PhiTable::beta(HalfInt s) const {
  const std::int64_t k = s - s_lo_;
  if (k < 0 || k >= static_cast<std::int64_t>(betas_.size()))
    throw config_error("PhiTable: beta(" + s.str() + ") outside the table");
  return betas_[k];
}

double PhiTable::b_of(HalfInt s_plus_1) const {
  return -2.0 * (alpha(s_plus_1) - alpha(s_plus_1 - 1)) / L_;
}

double PhiTable::recursion_residual_max(const SigmaProfile& sigma, double eps) const {
  double worst = 0.0;
  for (HalfInt s = s_lo_ + 1; s <= s_hi_ - 1; ++s) {
    const double qp = q_checked(L_, s + 1, sigma, eps, "phi recursion");
    const double q0 = q_checked(L_, s, sigma, eps, "phi recursion");
    const double qm = q_checked(L_, s - 1, sigma, eps, "phi recursion");
    const double qpp = q_checked(L_, s + 2, sigma, eps, "phi recursion");
    const double a_s = std::sqrt(qp * qm) / q0;
    const double a_s1 = std::sqrt(qpp * q0) / qp;
    const double b_s1 = b_of(s + 1);
    for (HalfInt l = l_lo_; l <= l_hi_; ++l) {
      const double lhs = a_s1 * at(l, s + 1) + a_s * at(l, s - 1);
      const double rhs = ((l.value() + s.value() + 1.0) / L_ + 0.5 * b_s1) * at(l, s);
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  }
  return worst;
}

IdpiiReport verify_idpii(double L, HalfInt s, const SigmaProfile& sigma, const PhiTable& phi,
                         HalfInt l_cut, double eps) {
  if (phi.s_lo() > s - 1 || phi.s_hi() < s + 1)
    throw config_error("verify_idpii: table must cover s-1..s+1");

  const double qp = q_checked(L, s + 1, sigma, eps, "verify_idpii");
  const double q0 = q_checked(L, s, sigma, eps, "verify_idpii");
  const double qm = q_checked(L, s - 1, sigma, eps, "verify_idpii");
  const double qpp = q_checked(L, s + 2, sigma, eps, "verify_idpii");
  const double a_s = std::sqrt(qp * qm) / q0;
  const double a_s1 = std::sqrt(qpp * q0) / qp;
  const double b_s1 = phi.b_of(s + 1);

  double sum_a = 0.0, sum_b = 0.0;
  for (HalfInt l = phi.l_lo(); l < phi.l_hi(); ++l) {
    const double ds = sigma(l + 1) - sigma(l);
    if (ds == 0.0) continue;
    sum_a += ds * phi.at(l + 1, s - 1) * phi.at(l, s);
    sum_b += ds * phi.at(l + 1, s) * phi.at(l, s);
  }

  IdpiiReport rep;
  rep.res_a_sum = std::fabs(1.0 / a_s - a_s - sum_a / L);
  rep.res_b_sum = std::fabs(b_s1 - 2.0 * sum_b / L);

  // neglected |Delta sigma| mass outside [l_lo, l_hi), times an edge bound on
  // |phi phi|; for the indicator both vanish
  double edge = 0.0;
  for (HalfInt sc = s - 1; sc <= s + 1; ++sc)
    edge = std::max({edge, std::fabs(phi.at(phi.l_lo(), sc)), std::fabs(phi.at(phi.l_hi(), sc))});
  const double left_mass = 2.0 * sigma.tail_sum_bound(-phi.l_lo().value());
  double right_mass = 1.0 - sigma(phi.l_hi());
  if (sigma.kind() == SigmaProfile::Kind::table) right_mass = sigma(phi.l_hi());
  rep.sum_tail_bound = (left_mass + right_mass) * edge * edge;

  double worst = 0.0;
  for (HalfInt l = phi.l_lo(); l <= std::min(l_cut, phi.l_hi()); ++l) {
    const double lhs = a_s1 * phi.at(l, s + 1) + a_s * phi.at(l, s - 1);
    const double rhs = ((l.value() + s.value() + 1.0) / L + 0.5 * b_s1) * phi.at(l, s);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  rep.res_recursion = worst;
  return rep;
}

double PainleveSequence::at(HalfInt s) const {
  const std::int64_t i = s - s_first;
  if (i < 0 || i >= static_cast<std::int64_t>(v.size()))
    throw config_error("PainleveSequence: s = " + s.str() + " not computed");
  return v[static_cast<std::size_t>(i)];
}

PainleveSequence dpii_sequence(double L, HalfInt s_max, double eps) {
  if (!(L > 0.0)) throw config_error("dpii_sequence: L must be positive");
  if (s_max.twice() < 1) throw config_error("dpii_sequence: s_max must be >= 1/2");
  const SigmaProfile ind = SigmaProfile::indicator();

  PainleveSequence seq;
  seq.L = L;
  seq.s_first = HalfInt(-1);
  seq.v.push_back(1.0);
  seq.v.push_back(-bessel_i(1, 2.0 * L) / bessel_i(0, 2.0 * L));
  seq.cross_check.push_back(0.0);  // s = -1/2: both sides vanish

  for (HalfInt s(1); s <= s_max; ++s) {
    // cross-check at the current tip s with v(s-1), v(s), before stepping
    const double vs = seq.v.back();
    const double qp = q_checked(L, s + 1, ind, eps, "dpii");
    const double q0 = q_checked(L, s, ind, eps, "dpii");
    const double qm = q_checked(L, s - 1, ind, eps, "dpii");
    const double cc = std::fabs(1.0 - vs * vs - qp * qm / (q0 * q0));
    seq.cross_check.push_back(cc);
    if (cc > 1e-6) {
      seq.blowup = s;
      seq.v.pop_back();
      seq.cross_check.pop_back();
      break;
    }
    if (s < s_max) {
      const double denom = vs * vs - 1.0;
      if (denom == 0.0)
        throw degenerate_determinant_error("dpii_sequence: v^2 = 1 at s = " + s.str());
      const double vm = seq.v[seq.v.size() - 2];
      seq.v.push_back((s.value() + 0.5) * vs / (L * denom) - vm);
    }
  }
  return seq;
}

VolterraReport volterra_residual(double L, HalfInt s, const PainleveSequence& seq, double h,
                                 double eps) {
  if (!(h > 0.0) || L - 2.0 * h <= 0.0) throw config_error("volterra_residual: need 0 < 2h < L");
  VolterraReport rep;

  if (seq.s_last() < s + 1) throw config_error("volterra_residual: sequence too short for s");
  const PainleveSequence plus = dpii_sequence(L + h, s + 1, eps);
  const PainleveSequence minus = dpii_sequence(L - h, s + 1, eps);
  const double dv = (plus.at(s) - minus.at(s)) / (2.0 * h);
  const double vs = seq.at(s);
  rep.volterra = std::fabs(dv - (1.0 - vs * vs) * (seq.at(s + 1) - seq.at(s - 1)));

  // compatibility relations on (a,b), indicator profile, five-point stencils
  const SigmaProfile ind = SigmaProfile::indicator();
  double a_of[5], g_s[5], g_s1[5];
  for (int k = -2; k <= 2; ++k) {
    const double Lk = L + k * h;
    const double qp = q_checked(Lk, s + 1, ind, eps, "volterra");
    const double q0 = q_checked(Lk, s, ind, eps, "volterra");
    const double qm = q_checked(Lk, s - 1, ind, eps, "volterra");
    a_of[k + 2] = std::sqrt(qp * qm) / q0;
    g_s[k + 2] = std::log(q0) - std::log(qm);
    g_s1[k + 2] = std::log(qp) - std::log(q0);
  }
  const double a_s = a_of[2];
  const double b_s = five_point_d1(g_s, h);
  const double b_s1 = five_point_d1(g_s1, h);
  const double da = five_point_d1(a_of, h);
  rep.relation_a = std::fabs(da - 0.5 * a_s * (b_s1 - b_s));

  const double db = five_point_d2(g_s, h);  // dL b(s) = d2L log(Q(s)/Q(s-1))
  double am_of[5];
  for (int k = -2; k <= 2; ++k) {
    const double Lk = L + k * h;
    if (s.twice() - 4 < -1) {  // Q(s-2) = 0 exactly below -1/2 for the indicator
      am_of[k + 2] = 0.0;
      continue;
    }
    const double q0 = q_checked(Lk, s, ind, eps, "volterra");
    const double qm = q_checked(Lk, s - 1, ind, eps, "volterra");
    const double qmm = q_checked(Lk, s - 2, ind, eps, "volterra");
    am_of[k + 2] = std::sqrt(q0 * qmm) / qm;
  }
  const double a_sm = am_of[2];
  rep.relation_b = std::fabs(db - 4.0 * (a_s * a_s - a_sm * a_sm) + b_s / L);
  return rep;
}

}  // namespace tbl
