#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tbl/integrable.hpp"

using tbl::dpii_sequence;
using tbl::frak_ab;
using tbl::FrakPair;
using tbl::gap_probability;
using tbl::HalfInt;
using tbl::IdpiiReport;
using tbl::PainleveSequence;
using tbl::PhiTable;
using tbl::SigmaProfile;
using tbl::small_l_check;
using tbl::SmallLFit;
using tbl::toda_residual;
using tbl::verify_idpii;
using tbl::volterra_residual;
using tbl::VolterraReport;

TEST_CASE("cylindrical Toda residual") {
  for (const SigmaProfile& sigma : {SigmaProfile::indicator(), SigmaProfile::fermi(0.5)}) {
    CHECK(toda_residual(1.0, HalfInt(3), sigma, 1e-2) < 1e-6);
    CHECK(toda_residual(1.0, HalfInt(1), sigma, 1e-2) < 1e-6);
  }
  // O(h^4) decay while above the determinant floor
  const double r1 = toda_residual(0.5, HalfInt(1), SigmaProfile::indicator(), 4e-2);
  const double r2 = toda_residual(0.5, HalfInt(1), SigmaProfile::indicator(), 2e-2);
  const double r3 = toda_residual(0.5, HalfInt(1), SigmaProfile::indicator(), 1e-2);
  CHECK(r2 < r1 / 6.0);
  CHECK(r3 < std::max(r2 / 6.0, 1e-12 / 1e-4));
  // s = -1/2 works for the indicator: Q(s-1) vanishes identically there
  CHECK(toda_residual(1.0, HalfInt(-1), SigmaProfile::indicator(), 1e-2) < 1e-6);
}

TEST_CASE("small-L expansion coefficient") {
  const std::vector<double> Ls = {0.05, 0.025, 0.0125};
  const SmallLFit ind = small_l_check(HalfInt(-1), SigmaProfile::indicator(), Ls);
  CHECK(ind.expected == doctest::Approx(-1.0));
  CHECK(std::fabs(ind.fitted + 1.0) < 1e-6);

  const SmallLFit f = small_l_check(HalfInt(1), SigmaProfile::fermi(0.5), Ls);
  // -(sigma(-1/2)-sigma(-3/2))/(1-sigma(-3/2)) = -(sqrt(2)-1)/2
  CHECK(f.expected == doctest::Approx(-(std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-14));
  CHECK(std::fabs(f.fitted - f.expected) < 1e-4);
  // raw deviations shrink like O(L^2) down the list
  REQUIRE(f.deviations.size() == 3);
  CHECK(f.deviations[1] < f.deviations[0]);
  CHECK(f.deviations[2] < f.deviations[1]);

  // indicator at s = 1/2 has a vanishing coefficient
  const SmallLFit z = small_l_check(HalfInt(1), SigmaProfile::indicator(), Ls);
  CHECK(z.expected == 0.0);
  CHECK(std::fabs(z.fitted) < 1e-4);

  CHECK_THROWS_AS(small_l_check(HalfInt(-3), SigmaProfile::indicator(), Ls),
                  tbl::degenerate_determinant_error);
}

TEST_CASE("frak pair routes agree") {
  const FrakPair ind = frak_ab(1.0, HalfInt(1), SigmaProfile::indicator());
  const double i0 = oracle::bessel_i_series(0, 2.0), i1 = oracle::bessel_i_series(1, 2.0);
  CHECK(ind.a_frak * ind.a_frak == doctest::Approx((i0 * i0 - i1 * i1) / (i0 * i0)).epsilon(1e-10));
  CHECK(ind.b_gap < 1e-6);

  const FrakPair f = frak_ab(1.0, HalfInt(3), SigmaProfile::fermi(0.5));
  CHECK(f.b_gap < 1e-6);
  CHECK(f.a_frak > 0.0);
}

TEST_CASE("phi table: trivial profile, asymptotics, recursion") {
  // sigma = 0: phi(l; L, s) = sqrt(L) J_{l+s+1}(2L) exactly
  const double L = 1.3;
  const PhiTable z(L, SigmaProfile::table({}), HalfInt(3), HalfInt(3), HalfInt(-7), HalfInt(7));
  for (HalfInt l(-7); l <= HalfInt(7); ++l) {
    const int ord = static_cast<int>((l.twice() + 3) / 2) + 1;
    CHECK(z.at(l, HalfInt(3)) ==
          doctest::Approx(std::sqrt(L) * oracle::bessel_j(ord, 2.0 * L)).epsilon(1e-12));
  }

  // large s: phi ~ sqrt(L) J_{l+s+1}(2L) within 1e-3
  for (const SigmaProfile& sigma : {SigmaProfile::indicator(), SigmaProfile::fermi(0.5)}) {
    const HalfInt s_star(4 * 2 + 21);  // 2 ceil(2L) + 21/2 at L = 1
    const PhiTable tab(1.0, sigma, s_star, s_star, HalfInt(-5), HalfInt(5));
    for (HalfInt l(-5); l <= HalfInt(5); ++l) {
      const int ord = static_cast<int>((l.twice() + s_star.twice()) / 2) + 1;
      const double ratio = tab.at(l, s_star) / (std::sqrt(1.0) * oracle::bessel_j(ord, 2.0));
      CHECK(std::fabs(ratio - 1.0) < 1e-3);
    }
  }
}

TEST_CASE("discrete integro-differential Painleve II identities") {
  for (const SigmaProfile& sigma : {SigmaProfile::indicator(), SigmaProfile::fermi(0.5)}) {
    const PhiTable phi(1.0, sigma, HalfInt(1), HalfInt(9), HalfInt(-41), HalfInt(43));
    for (const HalfInt s : {HalfInt(3), HalfInt(5), HalfInt(7)}) {
      const IdpiiReport rep = verify_idpii(1.0, s, sigma, phi, HalfInt(11));
      CHECK(rep.res_a_sum < 1e-7);
      CHECK(rep.res_b_sum < 1e-7);
      CHECK(rep.res_recursion < 1e-7);
      CHECK(rep.sum_tail_bound < 1e-7);
    }
    CHECK(phi.recursion_residual_max(sigma) < 1e-7);
  }
}

TEST_CASE("zero profile: identities are exact") {
  const SigmaProfile z = SigmaProfile::table({});
  CHECK(toda_residual(1.0, HalfInt(3), z, 1e-2) == 0.0);
  const PhiTable phi(1.0, z, HalfInt(1), HalfInt(5), HalfInt(-9), HalfInt(11));
  const IdpiiReport rep = verify_idpii(1.0, HalfInt(3), z, phi, HalfInt(5));
  CHECK(rep.res_a_sum == 0.0);  // a = 1 and empty sums
  CHECK(rep.res_b_sum == 0.0);
}

TEST_CASE("discrete Painleve II sequence with Fredholm cross-checks") {
  const PainleveSequence seq = dpii_sequence(1.0, HalfInt(15));
  CHECK(seq.at(HalfInt(-1)) == 1.0);
  const double i0 = oracle::bessel_i_series(0, 2.0), i1 = oracle::bessel_i_series(1, 2.0);
  CHECK(seq.at(HalfInt(1)) == doctest::Approx(-i1 / i0).epsilon(1e-13));
  CHECK(!seq.blowup.has_value());
  CHECK(seq.s_last() >= HalfInt(15));
  for (double c : seq.cross_check) CHECK(c < 1e-8);

  // eq: 1 - v(3/2)^2 equals the Toeplitz ratio
  const double v32 = seq.at(HalfInt(3));
  const double lhs = 1.0 - v32 * v32;
  const SigmaProfile ind = SigmaProfile::indicator();
  const double rhs = gap_probability(1.0, HalfInt(5), ind).q *
                     gap_probability(1.0, HalfInt(1), ind).q /
                     std::pow(gap_probability(1.0, HalfInt(3), ind).q, 2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));

  // 1 - a^2 = v^2 for the indicator wherever the cross-check holds
  for (const HalfInt s : {HalfInt(1), HalfInt(3), HalfInt(5)}) {
    const FrakPair fp = frak_ab(1.0, s, ind);
    CHECK(1.0 - fp.a_frak * fp.a_frak ==
          doctest::Approx(seq.at(s) * seq.at(s)).epsilon(1e-9));
  }
}

TEST_CASE("modified Volterra flow and Lax compatibility") {
  const PainleveSequence seq = dpii_sequence(1.0, HalfInt(7));
  const VolterraReport r1 = volterra_residual(1.0, HalfInt(1), seq, 1e-3);
  CHECK(r1.volterra < 1e-6);  // s = -1/2 neighbor has v identically 1
  const VolterraReport r3 = volterra_residual(1.0, HalfInt(3), seq, 1e-3);
  CHECK(r3.volterra < 1e-6);
  CHECK(r3.relation_a < 1e-6);
  CHECK(r3.relation_b < 1e-5);
}
