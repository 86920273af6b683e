#include "tbl/plancherel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <unordered_map>

namespace tbl {

namespace detail {

std::uint64_t uniform_below(std::uint64_t bound, std::mt19937_64& rng) {
  if (bound == 0) throw config_error("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r < limit) return r % bound;
  }
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Knuth's product method, valid while e^{-lambda} stays in range
std::int64_t poisson_knuth(double lambda, std::mt19937_64& rng) {
  const double target = std::exp(-lambda);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01(rng);
  } while (p > target);
  return k - 1;
}

}  // namespace

std::int64_t poisson_draw(double lambda, std::mt19937_64& rng) {
  if (lambda < 0.0) throw config_error("poisson_draw: negative rate");
  if (lambda > 1e6) throw resource_limit_error("poisson_draw: rate above cap");
  std::int64_t total = 0;
  while (lambda > 30.0) {
    total += poisson_knuth(30.0, rng);
    lambda -= 30.0;
  }
  if (lambda > 0.0) total += poisson_knuth(lambda, rng);
  return total;
}

Partition rsk_shape(const std::vector<std::int64_t>& perm) {
  std::vector<std::vector<std::int64_t>> rows;
  for (std::int64_t x : perm) {
    std::int64_t carry = x;
    for (auto& row : rows) {
      auto it = std::upper_bound(row.begin(), row.end(), carry);
      if (it == row.end()) {
        row.push_back(carry);
        carry = -1;
        break;
      }
      std::swap(*it, carry);
    }
    if (carry >= 0) rows.push_back({carry});
  }
  Partition out;
  out.parts.reserve(rows.size());
  for (const auto& row : rows) out.parts.push_back(static_cast<std::int64_t>(row.size()));
  return out;
}

}  // namespace detail

std::int64_t Partition::weight() const {
  std::int64_t w = 0;
  for (std::int64_t p : parts) w += p;
  return w;
}

Partition sample_plancherel(double L, std::mt19937_64& rng) {
  const std::int64_t n = detail::poisson_draw(L * L, rng);
  std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (std::int64_t i = n - 1; i > 0; --i) {
    const std::uint64_t j = detail::uniform_below(static_cast<std::uint64_t>(i) + 1, rng);
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  return detail::rsk_shape(perm);
}

Partition sample_plancherel(double L, std::uint64_t seed) {
  if (!(L > 0.0)) throw config_error("sample_plancherel: L must be positive");
  if (L * L > 400.0) throw resource_limit_error("sample_plancherel: L^2 above the 400 cap");
  std::mt19937_64 rng(seed);
  return sample_plancherel(L, rng);
}

namespace {

// master seeds of in-flight estimators; concurrent reuse would correlate
// streams that the caller believes are independent
std::mutex g_seed_mutex;
std::set<std::uint64_t> g_active_seeds;

struct SeedGuard {
  std::uint64_t seed;
  explicit SeedGuard(std::uint64_t s) : seed(s) {
    std::lock_guard lock(g_seed_mutex);
    if (!g_active_seeds.insert(seed).second)
      throw config_error("multiplicative_statistic_mc: seed " + std::to_string(seed) +
                         " already in use by a concurrent stream");
  }
  ~SeedGuard() {
    std::lock_guard lock(g_seed_mutex);
    g_active_seeds.erase(seed);
  }
};

}  // namespace

std::vector<McEstimate> multiplicative_statistic_mc_sweep(const SigmaProfile& sigma, double L,
                                                          const std::vector<HalfInt>& s_list,
                                                          std::int64_t n_samples,
                                                          std::uint64_t seed) {
  if (!(L > 0.0)) throw config_error("multiplicative_statistic_mc: L must be positive");
  if (L * L > 400.0) throw resource_limit_error("multiplicative_statistic_mc: L^2 above cap");
  if (n_samples < 2) throw config_error("multiplicative_statistic_mc: need n >= 2");
  SeedGuard guard(seed);

  const std::size_t ns = s_list.size();
  std::vector<double> sum(ns, 0.0), sumsq(ns, 0.0);
  // analytic tail products keyed by (s index, rows); partitions are small so
  // the table stays tiny
  std::vector<std::unordered_map<std::int64_t, double>> tails(ns);
  auto tail_of = [&](std::size_t si, std::int64_t rows) {
    auto& memo = tails[si];
    auto it = memo.find(rows);
    if (it != memo.end()) return it->second;
    const QZeroResult t = q_zero_from(s_list[si], sigma, rows + 1);
    const double v = t.exact_zero ? 0.0 : t.value;
    memo.emplace(rows, v);
    return v;
  };

  std::mt19937_64 rng(seed);
  for (std::int64_t k = 0; k < n_samples; ++k) {
    const Partition lam = sample_plancherel(L, rng);
    for (std::size_t si = 0; si < ns; ++si) {
      const HalfInt s = s_list[si];
      double prod = 1.0;
      for (std::int64_t i = 1; i <= lam.rows(); ++i) {
        // lambda_i - i - s on the lattice: twice = 2 lambda_i - 2 i - s.twice
        const HalfInt arg(2 * lam.part(i) - 2 * i - s.twice());
        prod *= 1.0 - sigma(arg);
        if (prod == 0.0) break;
      }
      if (prod != 0.0) prod *= tail_of(si, lam.rows());
      sum[si] += prod;
      sumsq[si] += prod * prod;
    }
  }

  std::vector<McEstimate> out(ns);
  for (std::size_t si = 0; si < ns; ++si) {
    const double n = static_cast<double>(n_samples);
    const double mean = sum[si] / n;
    const double var = std::max(0.0, (sumsq[si] - n * mean * mean) / (n - 1.0));
    out[si] = McEstimate{mean, std::sqrt(var / n), n_samples, seed};
  }
  return out;
}

McEstimate multiplicative_statistic_mc(const SigmaProfile& sigma, double L, HalfInt s,
                                       std::int64_t n_samples, std::uint64_t seed) {
  return multiplicative_statistic_mc_sweep(sigma, L, {s}, n_samples, seed).front();
}

}  // namespace tbl
