#include "tbl/specfun.hpp"

#include <cmath>
#include <limits>

namespace tbl {

double log_bessel_tail_bound(double x, int k) {
  if (x <= 0.0) throw config_error("bessel_tail_bound: x must be positive");
  if (k < 0) throw config_error("bessel_tail_bound: k must be nonnegative");
  return k * std::log(0.5 * x) - std::lgamma(static_cast<double>(k) + 1.0);
}

double bessel_tail_bound(double x, int k) { return std::exp(log_bessel_tail_bound(x, k)); }

namespace {

// Start order for the backward recurrence: far enough past n_max and past the
// turning point k ~ x that the contaminating (growing) solution is below eps.
int miller_start_order(double x, int n_max, double eps) {
  const double target = std::log(eps) + std::log(1e-4);
  int m = std::max(n_max + 8, static_cast<int>(std::ceil(x)) + 8);
  while (log_bessel_tail_bound(x, m) > target) {
    m += 1 + m / 8;
    if (m > 2'000'000)
      throw config_error("bessel_j_row: start order overflows the working range");
  }
  return m + 8;
}

}  // namespace

BesselRow bessel_j_row(double x, int n_max, double eps) {
  if (!(x > 0.0)) throw config_error("bessel_j_row: x must be positive");
  if (n_max < 0) throw config_error("bessel_j_row: n_max must be nonnegative");
  if (!(eps >= 1e-15)) throw config_error("bessel_j_row: eps below 1e-15 is not attainable");

  const int m = miller_start_order(x, n_max, eps);

  // downward: p_{k-1} = (2k/x) p_k - p_{k+1}; values grow toward k = 0, so
  // rescale on overflow risk and fold the factor into everything kept so far
  std::vector<double> p(static_cast<std::size_t>(m) + 1, 0.0);
  double pk1 = 0.0;           // p_{m+1}
  double pk = 1e-260;         // p_m, arbitrary seed
  p[static_cast<std::size_t>(m)] = pk;
  double norm = 0.0;          // p_0 + 2 sum_{j>=1} p_{2j}, accumulated on the fly
  if (m % 2 == 0) norm += 2.0 * pk;
  for (int k = m; k >= 1; --k) {
    double pkm1 = (2.0 * k / x) * pk - pk1;
    pk1 = pk;
    pk = pkm1;
    if (std::fabs(pk) > 1e260) {
      const double scale = 1e-260;
      pk *= scale;
      pk1 *= scale;
      norm *= scale;
      for (int j = k; j <= m; ++j) p[static_cast<std::size_t>(j)] *= scale;
    }
    p[static_cast<std::size_t>(k - 1)] = pk;
    if (k - 1 == 0)
      norm += pk;
    else if ((k - 1) % 2 == 0)
      norm += 2.0 * pk;
  }

  BesselRow row;
  row.x = x;
  row.n_max = n_max;
  row.values.assign(2 * static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    const double v = p[static_cast<std::size_t>(n)] / norm;
    row.values[static_cast<std::size_t>(n + n_max)] = v;
    row.values[static_cast<std::size_t>(-n + n_max)] = (n % 2 == 0) ? v : -v;
  }
  row.eps = std::max(eps * 1e-3, 8.0 * std::numeric_limits<double>::epsilon());
  return row;
}

double bessel_i(int n, double x) {
  if (!(x > 0.0)) throw config_error("bessel_i: x must be positive");
  if (n < 0) throw config_error("bessel_i: order must be nonnegative");
  // ascending series sum_j (x/2)^{n+2j} / (j! (n+j)!)
  const double h = 0.5 * x;
  double term = std::exp(n * std::log(h) - std::lgamma(static_cast<double>(n) + 1.0));
  double sum = term;
  for (int j = 1; j < 10000; ++j) {
    term *= h * h / (static_cast<double>(j) * (n + j));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

}  // namespace tbl
