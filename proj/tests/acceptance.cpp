// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tbl/continuum.hpp"
#include "tbl/integrable.hpp"
#include "tbl/plancherel.hpp"

using namespace tbl;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int idx, const std::string& name, bool pass, double worst, double tol,
            double secs, double budget) {
  const bool ok = pass && secs < budget;
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %d: %s (worst %.3e, tol %.1e, %.2f s / budget %.0f s)\n",
              ok ? "PASS" : "FAIL", idx, name.c_str(), worst, tol, secs, budget);
  std::fflush(stdout);
}

// ---- 1. closed-form anchors ------------------------------------------------
void criterion1() {
  Timer t;
  const double tol = 1e-10;
  double worst = 0.0;
  const SigmaProfile ind = SigmaProfile::indicator();
  for (const double L : {0.5, 1.0, 2.0}) {
    worst = std::max(worst,
                     std::fabs(gap_probability(L, HalfInt(-1), ind).q - std::exp(-L * L)));
    worst = std::max(worst, std::fabs(gap_probability(L, HalfInt(1), ind).q -
                                      std::exp(-L * L) * bessel_i(0, 2.0 * L)));
  }
  report(1, "closed-form anchors Q(-1/2), Q(1/2)", worst <= tol, worst, tol, t.seconds(), 1.0);
}

// ---- 2. Toeplitz identity ---------------------------------------------------
void criterion2() {
  Timer t;
  const double tol = 1e-11;
  double worst = 0.0;
  const SigmaProfile ind = SigmaProfile::indicator();
  for (const double L : {0.5, 1.0, 2.0, 3.0})
    for (HalfInt s(-1); s <= HalfInt(21); ++s)
      worst = std::max(worst, std::fabs(gap_probability(L, s, ind).q - toeplitz_q(L, s)));
  report(2, "Toeplitz determinant identity", worst <= tol, worst, tol, t.seconds(), 10.0);
}

// ---- 3. cylindrical Toda ----------------------------------------------------
void criterion3() {
  Timer t;
  const double tol = 1e-6;
  double worst = 0.0;
  bool decay_ok = true;
  const std::vector<double> hs = {2e-2, 1e-2, 5e-3};
  for (const SigmaProfile& sigma : {SigmaProfile::indicator(), SigmaProfile::fermi(0.5)}) {
    for (const double L : {0.5, 1.0, 2.0}) {
      for (HalfInt s(-1); s <= HalfInt(11); ++s) {
        double prev = -1.0;
        for (std::size_t k = 0; k < hs.size(); ++k) {
          const double r = toda_residual(L, s, sigma, hs[k]);
          worst = std::max(worst, r);
          if (k > 0) {
            // O(h^4) until the 1e-12 determinant floor
            const double floor = 1e-12 / (hs[k] * hs[k]);
            if (r > std::max(prev / 6.0, floor)) decay_ok = false;
          }
          prev = r;
        }
      }
    }
  }
  report(3, "cylindrical Toda residual + O(h^4) decay", worst <= tol && decay_ok, worst, tol,
         t.seconds(), 120.0);
}

// ---- 4. variational formulas ------------------------------------------------
void criterion4() {
  Timer t;
  const double tol_beta = 1e-9, tol_alpha = 1e-6, tol_det = 1e-9;
  double wb = 0.0, wa = 0.0, wd = 0.0;
  for (const SigmaProfile& sigma : {SigmaProfile::indicator(), SigmaProfile::fermi(0.5)}) {
    for (const double L : {0.5, 1.0, 2.0}) {
      for (HalfInt s(-1); s <= HalfInt(11); ++s) {
        const VariationalReport r = verify_variational(L, s, sigma, 0, 1e-3);
        wb = std::max(wb, r.res_beta);
        wa = std::max(wa, r.res_alpha);
        wd = std::max(wd, r.res_det_relation);
      }
    }
  }
  const bool pass = wb <= tol_beta && wa <= tol_alpha && wd <= tol_det;
  report(4, "variational formulas beta/alpha + det relation", pass,
         std::max({wb, wa, wd}), tol_alpha, t.seconds(), 120.0);
}

// ---- 5. discrete integro-differential PII ------------------------------------
void criterion5() {
  Timer t;
  const double tol = 1e-7, tol_ratio = 1e-3;
  double worst = 0.0, worst_ratio = 0.0;
  const double L = 1.0;
  for (const SigmaProfile& sigma : {SigmaProfile::indicator(), SigmaProfile::fermi(0.5)}) {
    const PhiTable phi(L, sigma, HalfInt(1), HalfInt(9), HalfInt(-41), HalfInt(43));
    for (const HalfInt s : {HalfInt(3), HalfInt(5), HalfInt(7)}) {
      const IdpiiReport r = verify_idpii(L, s, sigma, phi, HalfInt(11));
      worst = std::max({worst, r.res_a_sum, r.res_b_sum, r.res_recursion});
    }
    // large-s wavefunction ratio
    const HalfInt s_star(4 * static_cast<std::int64_t>(std::ceil(2.0 * L)) + 21);
    const PhiTable tail(L, sigma, s_star, s_star, HalfInt(-5), HalfInt(5));
    const BesselRow row = bessel_j_row(2.0 * L, static_cast<int>(s_star.twice() / 2) + 8);
    for (HalfInt l(-5); l <= HalfInt(5); ++l) {
      const double j = row.at(static_cast<int>((l.twice() + s_star.twice()) / 2) + 1);
      worst_ratio = std::max(worst_ratio,
                             std::fabs(tail.at(l, s_star) / (std::sqrt(L) * j) - 1.0));
    }
  }
  report(5, "Theorem-III sums, recursion, large-s wavefunction",
         worst <= tol && worst_ratio <= tol_ratio, std::max(worst, worst_ratio), tol,
         t.seconds(), 180.0);
}

// ---- 6. discrete Painleve II + modified Volterra -----------------------------
void criterion6() {
  Timer t;
  const double tol_cross = 1e-8, tol_volterra = 1e-6;
  const PainleveSequence seq = dpii_sequence(1.0, HalfInt(15));
  double worst = 0.0;
  for (const double c : seq.cross_check) worst = std::max(worst, c);
  const bool horizon = !seq.blowup.has_value() && seq.s_last() >= HalfInt(15);
  double wv = 0.0;
  for (const HalfInt s : {HalfInt(1), HalfInt(3)})
    wv = std::max(wv, volterra_residual(1.0, s, seq, 1e-3).volterra);
  report(6, "dPII cross-checks to 15/2 + modified Volterra",
         horizon && worst <= tol_cross && wv <= tol_volterra, std::max(worst, wv), tol_cross,
         t.seconds(), 30.0);
}

// ---- 7. small-L expansion ----------------------------------------------------
void criterion7() {
  Timer t;
  const std::vector<double> Ls = {0.05, 0.025, 0.0125};
  double worst_fermi = 0.0;
  for (const HalfInt s : {HalfInt(1), HalfInt(3)}) {
    const SmallLFit fit = small_l_check(s, SigmaProfile::fermi(0.5), Ls);
    worst_fermi = std::max(worst_fermi, std::fabs(fit.fitted - fit.expected));
  }
  const SmallLFit ind = small_l_check(HalfInt(-1), SigmaProfile::indicator(), Ls);
  const double dev_ind = std::fabs(ind.fitted + 1.0);
  report(7, "small-L coefficient (fermi 1e-4, indicator 1e-6)",
         worst_fermi <= 1e-4 && dev_ind <= 1e-6, std::max(worst_fermi, dev_ind), 1e-4,
         t.seconds(), 60.0);
}

// ---- 8. Monte Carlo cross-validation ------------------------------------------
void criterion8() {
  Timer t;
  const std::int64_t n = 100000;
  double worst_z = 0.0;
  {
    const SigmaProfile f = SigmaProfile::fermi(0.5);
    const auto est = multiplicative_statistic_mc_sweep(f, 2.0, {HalfInt(1), HalfInt(5)}, n, 31);
    const HalfInt ss[2] = {HalfInt(1), HalfInt(5)};
    for (int i = 0; i < 2; ++i) {
      const double q = gap_probability(2.0, ss[i], f).q;
      worst_z = std::max(worst_z, std::fabs(est[i].mean - q) / est[i].std_err);
    }
  }
  {
    const SigmaProfile ind = SigmaProfile::indicator();
    const auto est =
        multiplicative_statistic_mc_sweep(ind, 1.0, {HalfInt(-1), HalfInt(3)}, n, 32);
    const HalfInt ss[2] = {HalfInt(-1), HalfInt(3)};
    for (int i = 0; i < 2; ++i) {
      const double q = gap_probability(1.0, ss[i], ind).q;
      worst_z = std::max(worst_z, std::fabs(est[i].mean - q) / est[i].std_err);
    }
  }
  // RSK shape law at n = 3
  std::mt19937_64 rng(99);
  std::int64_t counts[4] = {0, 0, 0, 0};
  for (std::int64_t k = 0; k < n; ++k) {
    std::vector<std::int64_t> perm = {0, 1, 2};
    for (std::int64_t i = 2; i > 0; --i) {
      const auto j = detail::uniform_below(static_cast<std::uint64_t>(i) + 1, rng);
      std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
    }
    counts[detail::rsk_shape(perm).rows()]++;
  }
  const double probs[3] = {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
  for (int r = 1; r <= 3; ++r) {
    const double se = std::sqrt(probs[r - 1] * (1.0 - probs[r - 1]) / n);
    worst_z = std::max(worst_z,
                       std::fabs(counts[r] / static_cast<double>(n) - probs[r - 1]) / se);
  }
  report(8, "Monte Carlo vs Fredholm + RSK shape law", worst_z <= 3.0, worst_z, 3.0,
         t.seconds(), 120.0);
}

// ---- 9. KdV scaling diagnostic -------------------------------------------------
void criterion9() {
  Timer t;
  const auto pts = kdv_residual_diagnostic(0.0, 1.0, {0.4, 0.3, 0.2}, fermi_family(1.0));
  bool decreasing = pts.size() == 3;
  for (std::size_t i = 1; i < pts.size(); ++i)
    decreasing = decreasing && std::fabs(pts[i].residual) < std::fabs(pts[i - 1].residual);
  report(9, "bilinear KdV residual strictly decreasing in epsilon", decreasing,
         std::fabs(pts.back().residual), std::fabs(pts.front().residual), t.seconds(), 300.0);
}

}  // namespace

int main() {
  Timer total;
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d/9 criteria passed in %.1f s\n", 9 - g_failures, total.seconds());
  return g_failures == 0 ? 0 : 1;
}
