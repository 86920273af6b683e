#include "tbl/fredholm.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include <Eigen/LU>

namespace tbl {

namespace {

std::string gap_key(const std::string& sigma_id, double L, HalfInt s, double eps) {
  std::uint64_t lb, eb;
  std::memcpy(&lb, &L, sizeof lb);
  std::memcpy(&eb, &eps, sizeof eb);
  return sigma_id + "|" + std::to_string(lb) + "|" + std::to_string(s.twice()) + "|" +
         std::to_string(eb);
}

std::shared_mutex g_gap_mutex;
std::unordered_map<std::string, GapResult> g_gap_cache;

// log|det| and sign from an LU factorization of A
std::pair<double, int> logdet_lu(const Eigen::MatrixXd& A) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const auto& U = lu.matrixLU();
  double logdet = 0.0;
  int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const double d = U(i, i);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    logdet += std::log(std::fabs(d));
    if (d < 0.0) sign = -sign;
  }
  return {logdet, sign};
}

GapResult gap_from_window(double L, HalfInt s, const KernelMatrix& W) {
  GapResult out;
  out.L = L;
  out.s = s;
  out.trunc_err = W.trunc_err;
  out.window_lo = W.lo;
  out.window_hi = W.hi;
  const Eigen::Index n = W.size();
  out.floor = W.trunc_err + 1e-15 * static_cast<double>(n + 1);
  if (n == 0) {
    out.q = 1.0;
    out.log_q = 0.0;
    return out;
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - W.entries;
  const auto [logdet, sign] = logdet_lu(A);
  const double raw = (sign == 0) ? 0.0 : sign * std::exp(logdet);
  if (raw <= out.floor) {
    out.at_floor = true;
    out.q = std::min(std::max(raw, 0.0), out.floor);
    out.log_q = -std::numeric_limits<double>::infinity();
    if (raw < -10.0 * out.floor)
      throw consistency_error("gap_probability: determinant " + std::to_string(raw) +
                              " below -10x floor; window certificate violated");
    return out;
  }
  out.q = raw;
  out.log_q = logdet;  // sign == +1 here
  return out;
}

}  // namespace

void clear_gap_cache() {
  std::unique_lock lock(g_gap_mutex);
  g_gap_cache.clear();
}

GapResult gap_probability(double L, HalfInt s, const SigmaProfile& sigma, double eps) {
  if (!(L > 0.0)) throw config_error("gap_probability: L must be positive");
  const std::string key = gap_key(sigma.id(), L, s, eps);
  {
    std::shared_lock lock(g_gap_mutex);
    auto it = g_gap_cache.find(key);
    if (it != g_gap_cache.end()) return it->second;
  }
  const KernelMatrix W = build_M(s, L, sigma, eps);
  GapResult out = gap_from_window(L, s, W);
  {
    std::unique_lock lock(g_gap_mutex);
    g_gap_cache[key] = out;
  }
  return out;
}

namespace detail {

GapResult gap_probability_padded(double L, HalfInt s, const SigmaProfile& sigma, double eps,
                                 std::int64_t pad_left, std::int64_t pad_right) {
  KernelMatrix W = build_M(s, L, sigma, eps);
  if (W.size() == 0) return gap_from_window(L, s, W);
  const HalfInt lo = W.lo - pad_left;
  const HalfInt hi = W.hi + pad_right;
  const std::int64_t n = (hi - lo) + 1;
  KernelMatrix Wp;
  Wp.lo = lo;
  Wp.hi = hi;
  Wp.trunc_err = W.trunc_err;
  Wp.entries.resize(n, n);
  const double eps_entry =
      std::max(1e-15, std::min(0.5 * eps, eps / (16.0 * static_cast<double>(n))));
  const BesselRow row = tbl::detail::kernel_row(L, lo, hi, eps_entry);
  for (std::int64_t i = 0; i < n; ++i) {
    const HalfInt a = lo + i;
    const double sa = std::sqrt(sigma(HalfInt(a.twice() - s.twice() - 1)));
    for (std::int64_t j = i; j < n; ++j) {
      const HalfInt b = lo + j;
      const double sb = std::sqrt(sigma(HalfInt(b.twice() - s.twice() - 1)));
      const double v = sa * tbl::detail::kernel_bessel_row(a, b, L, row, eps_entry) * sb;
      Wp.entries(i, j) = v;
      Wp.entries(j, i) = v;
    }
  }
  return gap_from_window(L, s, Wp);
}

}  // namespace detail

QZeroResult q_zero_from(HalfInt s, const SigmaProfile& sigma, std::int64_t i_from, double eps) {
  QZeroResult out;
  double log_prod = 0.0;
  for (std::int64_t i = i_from;; ++i) {
    // factors 1 - sigma(-i - s)
    const HalfInt l(-2 * i - s.twice());
    const double f = 1.0 - sigma(l);
    if (f <= 0.0) {
      out.value = 0.0;
      out.exact_zero = true;
      return out;
    }
    log_prod += std::log(f);
    // remaining tail: l' <= -(i+1) - s, so T = i + 1 + s
    const double tail = sigma.tail_sum_bound(static_cast<double>(i + 1) + s.value());
    if (tail < 0.5 * eps && tail < 0.5) {
      out.value = std::exp(log_prod);
      out.trunc_err = out.value * 2.0 * tail;  // |log remainder| <= 2 tail for tail < 1/2
      return out;
    }
    if (i - i_from > 100000000)
      throw resource_limit_error("q_zero: tail certificate not reached within cap");
  }
}

QZeroResult q_zero(HalfInt s, const SigmaProfile& sigma, double eps) {
  return q_zero_from(s, sigma, 1, eps);
}

double ratio_identity_residual(double L, HalfInt s, const SigmaProfile& sigma, double eps) {
  const GapResult qs = gap_probability(L, s, sigma, eps);
  if (qs.at_floor || qs.q <= 10.0 * qs.trunc_err)
    throw degenerate_determinant_error("ratio identity: Q(L," + s.str() + ") at error floor");
  const GapResult qm = gap_probability(L, s - 1, sigma, eps);

  const KernelMatrix W = build_M(s, L, sigma, eps);
  const double lhs = qm.q / qs.q - 1.0;
  if (W.size() == 0) return std::fabs(lhs);

  const Eigen::Index n = W.size();
  const BesselRow row =
      bessel_j_row(2.0 * L, static_cast<int>(std::max(std::llabs(W.lo.twice()),
                                                      std::llabs(W.hi.twice())) / 2 + 2),
                   std::min(eps, 1e-13));
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const HalfInt a = W.point(i);
    v[i] = std::sqrt(sigma(HalfInt(a.twice() - s.twice() - 1))) *
           row.at(static_cast<int>((a.twice() - 1) / 2));
  }
  // K - T K T^{-1} telescopes to -J_{a-1/2} J_{b-1/2}, so the rank-one trace
  // enters with a minus sign
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - W.entries;
  const double trace = v.dot(Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(v));
  return std::fabs(lhs + trace);
}

double toeplitz_q(double L, HalfInt s) {
  if (!(L > 0.0)) throw config_error("toeplitz_q: L must be positive");
  if (s.twice() < -1 || (s.twice() & 1) == 0)
    throw config_error("toeplitz_q: s must be -1/2 or in Z'_+");
  const std::int64_t n = (s.twice() + 1) / 2;  // matrix size s + 1/2
  if (n == 0) return std::exp(-L * L);
  Eigen::MatrixXd T(n, n);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      T(i, j) = bessel_i(static_cast<int>(std::llabs(i - j)), 2.0 * L);
  const auto [logdet, sign] = logdet_lu(T);
  return sign * std::exp(-L * L + logdet);
}

}  // namespace tbl
