#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "tbl/plancherel.hpp"

using tbl::gap_probability;
using tbl::HalfInt;
using tbl::McEstimate;
using tbl::multiplicative_statistic_mc;
using tbl::multiplicative_statistic_mc_sweep;
using tbl::Partition;
using tbl::sample_plancherel;
using tbl::SigmaProfile;

TEST_CASE("RSK shape on fixed permutations") {
  // 312 -> shape (2,1); 123 -> (3); 321 -> (1,1,1)
  CHECK(tbl::detail::rsk_shape({2, 0, 1}).parts == std::vector<std::int64_t>{2, 1});
  CHECK(tbl::detail::rsk_shape({0, 1, 2}).parts == std::vector<std::int64_t>{3});
  CHECK(tbl::detail::rsk_shape({2, 1, 0}).parts == std::vector<std::int64_t>{1, 1, 1});
  CHECK(tbl::detail::rsk_shape({}).parts.empty());
  // longest increasing subsequence = first row
  CHECK(tbl::detail::rsk_shape({1, 4, 0, 3, 2}).parts.front() == 3);
}

TEST_CASE("shape law at n = 3 within 3 sigma") {
  std::mt19937_64 rng(99);
  const int n = 100000;
  std::map<std::int64_t, int> counts;
  for (int k = 0; k < n; ++k) {
    std::vector<std::int64_t> perm = {0, 1, 2};
    for (std::int64_t i = 2; i > 0; --i) {
      const auto j = tbl::detail::uniform_below(static_cast<std::uint64_t>(i) + 1, rng);
      std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
    }
    counts[tbl::detail::rsk_shape(perm).rows()]++;
  }
  const double p[3] = {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
  const std::int64_t rows[3] = {1, 2, 3};
  for (int i = 0; i < 3; ++i) {
    const double freq = counts[rows[i]] / static_cast<double>(n);
    const double se = std::sqrt(p[i] * (1.0 - p[i]) / n);
    CHECK(std::fabs(freq - p[i]) <= 3.0 * se);
  }
}

TEST_CASE("Poissonized sampler moments") {
  std::mt19937_64 rng(4242);
  const int n = 100000;
  // L = 1: P(empty) = e^{-1}; L = 2: E|lambda| = 4
  int empty = 0;
  double wsum = 0.0;
  for (int k = 0; k < n; ++k)
    if (sample_plancherel(1.0, rng).rows() == 0) ++empty;
  std::mt19937_64 rng2(777);
  for (int k = 0; k < n; ++k) wsum += static_cast<double>(sample_plancherel(2.0, rng2).weight());
  const double p0 = std::exp(-1.0);
  CHECK(std::fabs(empty / static_cast<double>(n) - p0) <= 3.0 * std::sqrt(p0 * (1 - p0) / n));
  // var|lambda| = L^2 = 4 for Poisson(4)
  CHECK(std::fabs(wsum / n - 4.0) <= 3.0 * std::sqrt(4.0 / n) + 0.01);
  // tiny L: almost surely empty
  std::mt19937_64 rng3(5);
  int nonempty = 0;
  for (int k = 0; k < 20000; ++k)
    if (sample_plancherel(0.01, rng3).rows() != 0) ++nonempty;
  CHECK(nonempty <= 3);  // Poisson(1e-4): P(nonzero) ~ 1e-4
}

TEST_CASE("reproducibility and seed guard") {
  const Partition a = sample_plancherel(2.0, std::uint64_t{12345});
  const Partition b = sample_plancherel(2.0, std::uint64_t{12345});
  CHECK(a.parts == b.parts);

  const McEstimate m1 = multiplicative_statistic_mc(SigmaProfile::fermi(0.5), 1.0, HalfInt(1),
                                                    5000, 2024);
  const McEstimate m2 = multiplicative_statistic_mc(SigmaProfile::fermi(0.5), 1.0, HalfInt(1),
                                                    5000, 2024);
  CHECK(m1.mean == m2.mean);
  CHECK(m1.std_err == m2.std_err);
  CHECK_THROWS_AS(sample_plancherel(25.0, std::uint64_t{1}), tbl::resource_limit_error);
}

TEST_CASE("indicator statistic is the largest-particle CDF") {
  // estimator is pathwise an indicator, hence monotone in s sample by sample
  const SigmaProfile ind = SigmaProfile::indicator();
  std::vector<HalfInt> ss;
  for (HalfInt s(-1); s <= HalfInt(9); ++s) ss.push_back(s);
  const auto est = multiplicative_statistic_mc_sweep(ind, 1.0, ss, 20000, 555);
  for (std::size_t i = 1; i < est.size(); ++i) CHECK(est[i].mean >= est[i - 1].mean);

  // at s = -1/2 it estimates P(empty) = e^{-1}
  CHECK(std::fabs(est[0].mean - std::exp(-1.0)) <= 3.0 * est[0].std_err);

  // sigma = 0: exactly 1 with zero variance
  const McEstimate z = multiplicative_statistic_mc(SigmaProfile::table({}), 1.0, HalfInt(1),
                                                   1000, 77);
  CHECK(z.mean == 1.0);
  CHECK(z.std_err == 0.0);
}

TEST_CASE("Monte Carlo agrees with the determinant route") {
  const std::int64_t n = 100000;
  {
    const SigmaProfile f = SigmaProfile::fermi(0.5);
    const auto est = multiplicative_statistic_mc_sweep(f, 2.0, {HalfInt(1), HalfInt(5)}, n, 31);
    for (std::size_t i = 0; i < est.size(); ++i) {
      const double q = gap_probability(2.0, i == 0 ? HalfInt(1) : HalfInt(5), f).q;
      CHECK(std::fabs(est[i].mean - q) <= 3.0 * est[i].std_err);
    }
  }
  {
    const SigmaProfile ind = SigmaProfile::indicator();
    const auto est =
        multiplicative_statistic_mc_sweep(ind, 1.0, {HalfInt(-1), HalfInt(3)}, n, 32);
    const double q0 = gap_probability(1.0, HalfInt(-1), ind).q;
    const double q1 = gap_probability(1.0, HalfInt(3), ind).q;
    CHECK(std::fabs(est[0].mean - q0) <= 3.0 * est[0].std_err);
    CHECK(std::fabs(est[1].mean - q1) <= 3.0 * est[1].std_err);
  }
}
