#include "tbl/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace tbl {

namespace detail {

namespace {

// upper bound for sum_{j>=0} B(x,k1+j) B(x,k2+j), k1,k2 >= 0; walks forward
// until the term ratio closes geometrically
double pair_tail_bound(double x, std::int64_t k1, std::int64_t k2) {
  double total = 0.0;
  for (std::int64_t j = 0;; ++j) {
    const double lt = log_bessel_tail_bound(x, static_cast<int>(k1 + j)) +
                      log_bessel_tail_bound(x, static_cast<int>(k2 + j));
    const double rho = (0.25 * x * x) /
                       (static_cast<double>(k1 + j + 1) * static_cast<double>(k2 + j + 1));
    if (rho < 0.5) return total + std::exp(lt) / (1.0 - rho);
    total += std::exp(lt);
    if (j > 500000) throw resource_limit_error("kernel tail bound cap exceeded");
  }
}

}  // namespace

BesselRow kernel_row(double L, HalfInt lo, HalfInt hi, double eps) {
  const double x = 2.0 * L;
  const std::int64_t reach =
      std::max(std::llabs(lo.twice()), std::llabs(hi.twice())) / 2 + 1;
  // the diagonal series at the window's left edge runs to orders where the
  // remainder certifies below eps; cover that plus slack
  std::int64_t k = std::max<std::int64_t>(reach, static_cast<std::int64_t>(std::ceil(0.5 * x)) + 2);
  while (pair_tail_bound(x, k, k) > 0.01 * eps) {
    ++k;
    if (k > 500000) throw resource_limit_error("kernel row order cap exceeded");
  }
  return bessel_j_row(x, static_cast<int>(k + reach + 2), std::min(eps, 1e-13));
}

double kernel_bessel_row(HalfInt a, HalfInt b, double L, const BesselRow& row, double eps) {
  const double x = 2.0 * L;
  const int am = static_cast<int>((a.twice() - 1) / 2), ap = am + 1;  // orders a -+ 1/2
  const int bm = static_cast<int>((b.twice() - 1) / 2), bp = bm + 1;

  // series sum_{l>=1/2} J_{a+l} J_{b+l}: terms at orders (am+j, bm+j), j>=1;
  // cut once the pair tail certifies below eps/2
  int j_hi = std::max({1, static_cast<int>(std::ceil(0.5 * x)) + 1 - std::min(am, bm)});
  while (pair_tail_bound(x, am + j_hi + 1, bm + j_hi + 1) > 0.5 * eps) {
    ++j_hi;
    if (j_hi > 500000) throw resource_limit_error("kernel series cap exceeded");
  }
  double series = 0.0;
  for (int j = j_hi; j >= 1; --j) series += row.at(am + j) * row.at(bm + j);

  if (a == b) return series;

  const double closed =
      L * (row.at(am) * row.at(bp) - row.at(ap) * row.at(bm)) / static_cast<double>(a - b);
  if (std::fabs(closed - series) > 10.0 * eps + 1e-12 * std::fabs(series))
    throw consistency_error("discrete Bessel kernel: closed form and series disagree at (" +
                            a.str() + "," + b.str() + "), gap " +
                            std::to_string(std::fabs(closed - series)));
  return series;
}

double right_diag_tail_bound(double L, HalfInt hi) {
  const double x = 2.0 * L;
  const std::int64_t k0 = hi.twice() / 2 + 2;  // first discarded order, = hi + 3/2
  // sum_{a>hi} K(a,a) = sum_{k>=k0} (k-k0+1) J_k^2 <= sum (k-k0+1) B(x,k)^2
  double total = 0.0;
  for (std::int64_t k = k0;; ++k) {
    const double lb = log_bessel_tail_bound(x, static_cast<int>(k));
    const double term = static_cast<double>(k - k0 + 1) * std::exp(2.0 * lb);
    const double rho = (0.25 * x * x) * static_cast<double>(k + 2 - k0) /
                       (static_cast<double>(k + 1) * static_cast<double>(k + 1) *
                        static_cast<double>(k + 1 - k0));
    if (rho < 0.5) return total + term / (1.0 - rho);
    total += term;
    if (k - k0 > 500000) throw resource_limit_error("kernel diagonal tail cap exceeded");
  }
}

HalfInt right_diag_cut(double L, HalfInt from, double eps, std::int64_t cap) {
  HalfInt hi = from;
  while (right_diag_tail_bound(L, hi) > eps) {
    ++hi;
    if (hi - from > cap) throw resource_limit_error("kernel window right edge exceeds cap");
  }
  return hi;
}

}  // namespace detail

double kernel_bessel(HalfInt a, HalfInt b, double L, double eps) {
  if (!(L > 0.0)) throw config_error("kernel_bessel: L must be positive");
  const BesselRow row = detail::kernel_row(L, std::min(a, b), std::max(a, b), eps);
  return detail::kernel_bessel_row(a, b, L, row, eps);
}

double kernel_finite_temp(HalfInt a, HalfInt b, double L, const SigmaProfile& sigma, double eps) {
  if (!(L > 0.0)) throw config_error("kernel_finite_temp: L must be positive");
  const double x = 2.0 * L;
  const int am = static_cast<int>((a.twice() - 1) / 2);
  const int bm = static_cast<int>((b.twice() - 1) / 2);

  // term at l = j - 1/2 has orders (am+j, bm+j); sigma <= 1 on both tails
  int j_hi = std::max({1, static_cast<int>(std::ceil(0.5 * x)) + 1 - std::min(am, bm)});
  while (detail::pair_tail_bound(x, am + j_hi + 1, bm + j_hi + 1) > 0.25 * eps) ++j_hi;
  int j_lo = std::min({0, -static_cast<int>(std::ceil(0.5 * x)) - 1 - std::max(am, bm)});
  while (detail::pair_tail_bound(x, -(am + j_lo - 1), -(bm + j_lo - 1)) > 0.25 * eps) --j_lo;

  const int need = std::max(std::max(am, bm) + j_hi, -(std::min(am, bm) + j_lo)) + 1;
  const BesselRow row = bessel_j_row(x, need, std::min(eps, 1e-13));

  double sum = 0.0;
  for (int j = j_hi; j >= j_lo; --j) {
    const double s = sigma(HalfInt(2 * static_cast<std::int64_t>(j) - 1));
    if (s == 0.0) continue;
    sum += s * row.at(am + j) * row.at(bm + j);
  }
  return sum;
}

KernelMatrix build_M(HalfInt s, double L, const SigmaProfile& sigma, double eps) {
  if (!(L > 0.0)) throw config_error("build_M: L must be positive");

  KernelMatrix out;
  if (sigma.is_zero()) {
    out.trunc_err = 0.0;
    return out;  // empty window
  }

  // left edge: discarded trace sum_{a<lo} sigma(a-s-1/2) K(a,a) <= sigma tail,
  // since K(a,a) <= 1; the indicator cuts exactly at a = s+1
  HalfInt lo{1};
  double left_err = 0.0;
  if (sigma.kind() == SigmaProfile::Kind::indicator) {
    lo = s + 1;
  } else {
    const double T = sigma.tail_cut(0.5 * eps);
    lo = (s + 1) - std::llround(T - 0.5);  // ensures s - lo + 3/2 = T
    left_err = sigma.tail_sum_bound(static_cast<double>(s - lo) + 1.5);
  }

  // right edge: discarded K diagonal, Bessel-certified
  const HalfInt from = std::max(lo, HalfInt::nearest(2.0 * L));
  const HalfInt hi = detail::right_diag_cut(L, from, 0.5 * eps);
  const double right_err = detail::right_diag_tail_bound(L, hi);

  const std::int64_t n = (hi - lo) + 1;
  out.trunc_err = left_err + right_err;
  if (n <= 0) return out;
  if (n > 20000)
    throw resource_limit_error("build_M: window of " + std::to_string(n) + " exceeds cap");

  // per-entry series budget small enough that n of them stay under the window
  // certificate; the series converges superexponentially so this is cheap
  const double eps_entry =
      std::max(1e-15, std::min(0.5 * eps, eps / (16.0 * static_cast<double>(n))));
  out.trunc_err += static_cast<double>(n) * eps_entry;

  const BesselRow row = detail::kernel_row(L, lo, hi, eps_entry);
  Eigen::VectorXd sq(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const HalfInt a = lo + i;
    sq[i] = std::sqrt(sigma(HalfInt(a.twice() - s.twice() - 1)));
  }

  out.lo = lo;
  out.hi = hi;
  out.entries.resize(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    const HalfInt a = lo + i;
    for (std::int64_t j = i; j < n; ++j) {
      const HalfInt b = lo + j;
      const double v = sq[i] * detail::kernel_bessel_row(a, b, L, row, eps_entry) * sq[j];
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  }
  return out;
}

}  // namespace tbl
