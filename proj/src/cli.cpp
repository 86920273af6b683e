#include "tbl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tbl/continuum.hpp"
#include "tbl/integrable.hpp"
#include "tbl/parallel.hpp"
#include "tbl/plancherel.hpp"

namespace tbl {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<HalfInt> parse_s_spec(const std::string& spec) {
  std::vector<HalfInt> out;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const HalfInt a = HalfInt::parse(spec.substr(0, dots));
    const HalfInt b = HalfInt::parse(spec.substr(dots + 2));
    if (b < a) throw config_error("s range: " + spec + " is empty");
    for (HalfInt s = a; s <= b; ++s) out.push_back(s);
    return out;
  }
  for (const auto& tok : split(spec, ',')) out.push_back(HalfInt::parse(tok));
  if (out.empty()) throw config_error("s spec: empty");
  return out;
}

std::vector<double> parse_L_spec(const std::string& spec) {
  std::vector<double> out;
  for (const auto& tok : split(spec, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == nullptr || *end != '\0' || !(v > 0.0))
      throw config_error("L spec: bad value \"" + tok + "\"");
    out.push_back(v);
  }
  return out;
}

SigmaProfile parse_sigma_spec(const std::string& spec, double u_flag) {
  if (spec == "indicator") return SigmaProfile::indicator();
  if (spec == "zero") return SigmaProfile::table({});
  if (spec == "fermi") {
    if (!(u_flag >= 0.0)) throw config_error("--sigma fermi needs --u");
    return SigmaProfile::fermi(u_flag);
  }
  if (spec.rfind("fermi:", 0) == 0) {
    char* end = nullptr;
    const double u = std::strtod(spec.c_str() + 6, &end);
    if (end == nullptr || *end != '\0') throw config_error("bad fermi spec \"" + spec + "\"");
    return SigmaProfile::fermi(u);
  }
  throw config_error("unknown sigma spec \"" + spec + "\" (use indicator | fermi:<u> | zero)");
}

int run_compute(const ComputeConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.L_grid.empty() || cfg.s_range.empty())
    throw config_error("compute: need --L and --s");

  struct Row {
    double L;
    HalfInt s{1};
    GapResult g;
  };
  std::vector<double> Ls = cfg.L_grid;
  std::sort(Ls.begin(), Ls.end());
  std::vector<HalfInt> ss = cfg.s_range;
  std::sort(ss.begin(), ss.end());

  std::vector<Row> rows(Ls.size() * ss.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const double L = Ls[k / ss.size()];
    const HalfInt s = ss[k % ss.size()];
    rows[k] = Row{L, s, gap_probability(L, s, cfg.sigma, cfg.eps)};
  });

  // monotonicity of q in s at fixed L, up to the certificates
  bool monotone = true;
  for (std::size_t i = 0; i < Ls.size(); ++i)
    for (std::size_t j = 1; j < ss.size(); ++j) {
      const GapResult& a = rows[i * ss.size() + j - 1].g;
      const GapResult& b = rows[i * ss.size() + j].g;
      if (ss[j] - ss[j - 1] == 1 && b.q < a.q - 2.0 * (a.trunc_err + b.trunc_err)) {
        err << "monotonicity violated at L=" << Ls[i] << " s=" << ss[j].str() << "\n";
        monotone = false;
      }
    }

  if (cfg.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const Row& r : rows)
      arr.push_back({{"sigma_id", cfg.sigma.id()},
                     {"L", r.L},
                     {"s", r.s.str()},
                     {"q", r.g.q},
                     {"trunc_err", r.g.trunc_err},
                     {"at_floor", r.g.at_floor},
                     {"window_lo", r.g.window_lo.str()},
                     {"window_hi", r.g.window_hi.str()}});
    out << arr.dump(2) << "\n";
  } else {
    out << "sigma_id,L,s,q,trunc_err,window_lo,window_hi\n";
    for (const Row& r : rows) {
      out << cfg.sigma.id() << "," << fmt(r.L) << "," << fmt(r.s.value()) << "," << fmt(r.g.q)
          << "," << fmt(r.g.trunc_err) << ",";
      if (r.g.window_hi < r.g.window_lo)
        out << ",";
      else
        out << fmt(r.g.window_lo.value()) << "," << fmt(r.g.window_hi.value());
      out << "\n";
    }
  }
  return monotone ? kExitOk : kExitCheckFailed;
}

namespace {

struct CheckRecorder {
  nlohmann::json reports = nlohmann::json::array();
  bool all_pass = true;
  bool resource_hit = false;

  void add(const std::string& check, const nlohmann::json& params, double residual,
           double tolerance, bool pass) {
    reports.push_back({{"check", check},
                       {"params", params},
                       {"residual", residual},
                       {"tolerance", tolerance},
                       {"pass", pass}});
    all_pass = all_pass && pass;
  }

  void fail(const std::string& check, const nlohmann::json& params, const std::string& why) {
    nlohmann::json j = {{"check", check}, {"params", params}, {"pass", false}, {"error", why}};
    reports.push_back(j);
    all_pass = false;
  }

  template <typename Fn>
  void guarded(const std::string& check, const nlohmann::json& params, Fn&& fn) {
    try {
      fn();
    } catch (const resource_limit_error& e) {
      resource_hit = true;
      fail(check, params, e.what());
    } catch (const std::exception& e) {
      fail(check, params, e.what());
    }
  }
};

double tol_or(const VerifyConfig& cfg, double dflt) { return cfg.tol > 0.0 ? cfg.tol : dflt; }

std::vector<SigmaProfile> profiles_for(const VerifyConfig& cfg) {
  if (cfg.sigma_given) return {cfg.sigma};
  return {SigmaProfile::indicator(), SigmaProfile::fermi(0.5)};
}

void check_anchors(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-10);
  const std::vector<double> Ls = cfg.L_grid.empty() ? std::vector<double>{0.5, 1.0, 2.0} : cfg.L_grid;
  const SigmaProfile ind = SigmaProfile::indicator();
  for (double L : Ls) {
    nlohmann::json params = {{"L", L}};
    rec.guarded("anchors", params, [&] {
      const double q0 = gap_probability(L, HalfInt(-1), ind, cfg.eps).q;
      const double q1 = gap_probability(L, HalfInt(1), ind, cfg.eps).q;
      const double r0 = std::fabs(q0 - std::exp(-L * L));
      const double r1 = std::fabs(q1 - std::exp(-L * L) * bessel_i(0, 2.0 * L));
      rec.add("anchors", params, std::max(r0, r1), tol, std::max(r0, r1) <= tol);
    });
  }
}

void check_toeplitz(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-11);
  const std::vector<double> Ls =
      cfg.L_grid.empty() ? std::vector<double>{0.5, 1.0, 2.0, 3.0} : cfg.L_grid;
  const std::vector<HalfInt> ss = cfg.s_given ? cfg.s_range : parse_s_spec("-1/2..21/2");
  const SigmaProfile ind = SigmaProfile::indicator();
  for (double L : Ls) {
    double worst = 0.0;
    nlohmann::json params = {{"L", L}, {"s_max", ss.back().str()}};
    rec.guarded("toeplitz", params, [&] {
      for (HalfInt s : ss)
        worst = std::max(worst,
                         std::fabs(gap_probability(L, s, ind, cfg.eps).q - toeplitz_q(L, s)));
      rec.add("toeplitz", params, worst, tol, worst <= tol);
    });
  }
}

void check_toda(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-6);
  const std::vector<double> Ls =
      cfg.L_grid.empty() ? (cfg.quick ? std::vector<double>{1.0} : std::vector<double>{0.5, 1.0, 2.0})
                         : cfg.L_grid;
  const std::vector<HalfInt> ss =
      cfg.s_given ? cfg.s_range : parse_s_spec(cfg.quick ? "1/2..3/2" : "-1/2..11/2");
  for (const SigmaProfile& sigma : profiles_for(cfg)) {
    for (double L : Ls) {
      nlohmann::json params = {{"sigma", sigma.id()}, {"L", L}, {"h", cfg.h}};
      rec.guarded("toda", params, [&] {
        double worst = 0.0;
        for (HalfInt s : ss) worst = std::max(worst, toda_residual(L, s, sigma, cfg.h, cfg.eps));
        rec.add("toda", params, worst, tol, worst <= tol);
      });
    }
  }
}

void check_variational(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol_beta = tol_or(cfg, 1e-9);
  const double tol_alpha = tol_or(cfg, 1e-6);
  const std::vector<double> Ls =
      cfg.L_grid.empty() ? (cfg.quick ? std::vector<double>{1.0} : std::vector<double>{0.5, 1.0, 2.0})
                         : cfg.L_grid;
  const std::vector<HalfInt> ss =
      cfg.s_given ? cfg.s_range : parse_s_spec(cfg.quick ? "1/2..3/2" : "-1/2..11/2");
  const double h = cfg.h > 0.0 ? std::min(cfg.h, 1e-3) : 1e-3;
  for (const SigmaProfile& sigma : profiles_for(cfg)) {
    for (double L : Ls) {
      nlohmann::json params = {{"sigma", sigma.id()}, {"L", L}, {"h", h}};
      rec.guarded("variational", params, [&] {
        double wb = 0.0, wa = 0.0, wd = 0.0;
        for (HalfInt s : ss) {
          const VariationalReport r = verify_variational(L, s, sigma, 0, h, cfg.eps);
          wb = std::max(wb, r.res_beta);
          wa = std::max(wa, r.res_alpha);
          wd = std::max(wd, r.res_det_relation);
        }
        const bool pass = wb <= tol_beta && wa <= tol_alpha && wd <= tol_beta;
        nlohmann::json p2 = params;
        p2["res_beta"] = wb;
        p2["res_alpha"] = wa;
        p2["res_det_relation"] = wd;
        rec.add("variational", p2, std::max({wb, wa, wd}), tol_alpha, pass);
      });
    }
  }
}

void check_idpii(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-7);
  const std::vector<double> Ls = cfg.L_grid.empty() ? std::vector<double>{1.0} : cfg.L_grid;
  const std::vector<HalfInt> ss = cfg.s_given ? cfg.s_range : parse_s_spec("3/2..7/2");
  for (const SigmaProfile& sigma : profiles_for(cfg)) {
    for (double L : Ls) {
      nlohmann::json params = {{"sigma", sigma.id()}, {"L", L}};
      rec.guarded("idpii", params, [&] {
        const HalfInt s_lo = ss.front() - 1, s_hi = ss.back() + 1;
        const PhiTable phi(L, sigma, s_lo, s_hi, HalfInt(-41), HalfInt(43), 0, cfg.eps);
        double worst = 0.0;
        for (HalfInt s : ss) {
          const IdpiiReport r = verify_idpii(L, s, sigma, phi, HalfInt(11), cfg.eps);
          worst = std::max({worst, r.res_a_sum, r.res_b_sum, r.res_recursion});
        }
        rec.add("idpii", params, worst, tol, worst <= tol);
      });
    }
  }
}

void check_phi_asymptotics(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-3);
  const std::vector<double> Ls = cfg.L_grid.empty() ? std::vector<double>{1.0} : cfg.L_grid;
  for (const SigmaProfile& sigma : profiles_for(cfg)) {
    for (double L : Ls) {
      nlohmann::json params = {{"sigma", sigma.id()}, {"L", L}};
      rec.guarded("phi", params, [&] {
        const HalfInt s_star(4 * static_cast<std::int64_t>(std::ceil(2.0 * L)) + 21);
        const PhiTable phi(L, sigma, s_star, s_star, HalfInt(-5), HalfInt(5), 0, cfg.eps);
        const BesselRow row =
            bessel_j_row(2.0 * L, static_cast<int>(s_star.twice() / 2 + 8), 1e-14);
        double worst = 0.0;
        for (HalfInt l(-5); l <= HalfInt(5); ++l) {
          const double j = row.at(static_cast<int>((l.twice() + s_star.twice()) / 2 + 1));
          const double ratio = phi.at(l, s_star) / (std::sqrt(L) * j);
          worst = std::max(worst, std::fabs(ratio - 1.0));
        }
        rec.add("phi", params, worst, tol, worst <= tol);
      });
    }
  }
}

void check_dpii(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-8);
  const std::vector<double> Ls = cfg.L_grid.empty() ? std::vector<double>{1.0} : cfg.L_grid;
  for (double L : Ls) {
    nlohmann::json params = {{"L", L}, {"s_max", cfg.s_max.str()}};
    rec.guarded("dpii", params, [&] {
      const PainleveSequence seq = dpii_sequence(L, cfg.s_max, cfg.eps);
      double worst = 0.0;
      for (double c : seq.cross_check) worst = std::max(worst, c);
      const bool horizon_ok = !seq.blowup.has_value() && seq.s_last() >= cfg.s_max;
      nlohmann::json p2 = params;
      p2["s_reached"] = seq.s_last().str();
      if (seq.blowup) p2["blowup"] = seq.blowup->str();
      rec.add("dpii", p2, worst, tol, horizon_ok && worst <= tol);
    });
  }
}

void check_volterra(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-6);
  const std::vector<double> Ls = cfg.L_grid.empty() ? std::vector<double>{1.0} : cfg.L_grid;
  const std::vector<HalfInt> ss = cfg.s_given ? cfg.s_range : parse_s_spec("1/2..3/2");
  const double h = cfg.h > 0.0 ? std::min(cfg.h, 1e-3) : 1e-3;
  for (double L : Ls) {
    nlohmann::json params = {{"L", L}, {"h", h}};
    rec.guarded("volterra", params, [&] {
      const PainleveSequence seq = dpii_sequence(L, ss.back() + 1, cfg.eps);
      double worst = 0.0;
      for (HalfInt s : ss) {
        const VolterraReport r = volterra_residual(L, s, seq, h, cfg.eps);
        worst = std::max({worst, r.volterra, r.relation_a, r.relation_b});
      }
      rec.add("volterra", params, worst, tol, worst <= tol);
    });
  }
}

void check_smalll(const VerifyConfig& cfg, CheckRecorder& rec) {
  const std::vector<double> Ls =
      cfg.L_grid.empty() ? std::vector<double>{0.05, 0.025, 0.0125} : cfg.L_grid;
  // fermi points
  if (!cfg.sigma_given || cfg.sigma.kind() == SigmaProfile::Kind::fermi) {
    const SigmaProfile f = cfg.sigma_given ? cfg.sigma : SigmaProfile::fermi(0.5);
    const double tol = tol_or(cfg, 1e-4);
    for (HalfInt s : (cfg.s_given ? cfg.s_range : parse_s_spec("1/2..3/2"))) {
      nlohmann::json params = {{"sigma", f.id()}, {"s", s.str()}};
      rec.guarded("smalll", params, [&] {
        const SmallLFit fit = small_l_check(s, f, Ls, 1e-13);
        const double dev = std::fabs(fit.fitted - fit.expected);
        rec.add("smalll", params, dev, tol, dev <= tol);
      });
    }
  }
  if (!cfg.sigma_given || cfg.sigma.kind() == SigmaProfile::Kind::indicator) {
    const double tol = tol_or(cfg, 1e-6);
    nlohmann::json params = {{"sigma", "indicator"}, {"s", "-1/2"}};
    rec.guarded("smalll", params, [&] {
      const SmallLFit fit = small_l_check(HalfInt(-1), SigmaProfile::indicator(), Ls, 1e-13);
      const double dev = std::fabs(fit.fitted - (-1.0));
      rec.add("smalll", params, dev, tol, dev <= tol);
    });
  }
}

void check_ratio(const VerifyConfig& cfg, CheckRecorder& rec) {
  const double tol = tol_or(cfg, 1e-10);
  const std::vector<double> Ls = cfg.L_grid.empty() ? std::vector<double>{1.0} : cfg.L_grid;
  const std::vector<HalfInt> ss = cfg.s_given ? cfg.s_range : parse_s_spec("1/2..3/2");
  for (const SigmaProfile& sigma : profiles_for(cfg)) {
    for (double L : Ls) {
      nlohmann::json params = {{"sigma", sigma.id()}, {"L", L}};
      rec.guarded("ratio", params, [&] {
        double worst = 0.0;
        for (HalfInt s : ss)
          worst = std::max(worst, ratio_identity_residual(L, s, sigma, cfg.eps));
        rec.add("ratio", params, worst, tol, worst <= tol);
      });
    }
  }
}

void check_mc(const VerifyConfig& cfg, CheckRecorder& rec) {
  const std::int64_t n = cfg.quick ? std::min<std::int64_t>(cfg.samples, 20000) : cfg.samples;
  struct Point {
    SigmaProfile sigma;
    double L;
    std::vector<HalfInt> ss;
  };
  std::vector<Point> pts;
  if (cfg.sigma_given) {
    pts.push_back({cfg.sigma, cfg.L_grid.empty() ? 1.0 : cfg.L_grid.front(),
                   cfg.s_given ? cfg.s_range : parse_s_spec("-1/2..3/2")});
  } else {
    pts.push_back({SigmaProfile::fermi(0.5), 2.0, {HalfInt(1), HalfInt(5)}});
    pts.push_back({SigmaProfile::indicator(), 1.0, {HalfInt(-1), HalfInt(3)}});
  }
  std::uint64_t seed = cfg.seed;
  for (const Point& p : pts) {
    nlohmann::json params = {{"sigma", p.sigma.id()}, {"L", p.L}, {"n", n}, {"seed", seed}};
    rec.guarded("mc", params, [&] {
      const auto est = multiplicative_statistic_mc_sweep(p.sigma, p.L, p.ss, n, seed);
      double worst_z = 0.0;
      for (std::size_t i = 0; i < p.ss.size(); ++i) {
        const double q = gap_probability(p.L, p.ss[i], p.sigma, cfg.eps).q;
        const double z = std::fabs(est[i].mean - q) / std::max(est[i].std_err, 1e-300);
        worst_z = std::max(worst_z, z);
      }
      rec.add("mc", params, worst_z, 3.0, worst_z <= 3.0);
    });
    ++seed;
  }
}

void check_rsk(const VerifyConfig& cfg, CheckRecorder& rec) {
  const std::int64_t n = cfg.quick ? std::min<std::int64_t>(cfg.samples, 20000) : cfg.samples;
  nlohmann::json params = {{"n", n}, {"seed", cfg.seed}};
  rec.guarded("rsk", params, [&] {
    std::mt19937_64 rng(cfg.seed);
    std::int64_t c3 = 0, c21 = 0, c111 = 0;
    for (std::int64_t k = 0; k < n; ++k) {
      std::vector<std::int64_t> perm = {0, 1, 2};
      for (std::int64_t i = 2; i > 0; --i) {
        const auto j = detail::uniform_below(static_cast<std::uint64_t>(i) + 1, rng);
        std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
      }
      const Partition sh = detail::rsk_shape(perm);
      if (sh.rows() == 1)
        ++c3;
      else if (sh.rows() == 3)
        ++c111;
      else
        ++c21;
    }
    const double N = static_cast<double>(n);
    double worst_z = 0.0;
    const double probs[3] = {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
    const double counts[3] = {static_cast<double>(c3), static_cast<double>(c21),
                              static_cast<double>(c111)};
    for (int i = 0; i < 3; ++i) {
      const double se = std::sqrt(probs[i] * (1.0 - probs[i]) / N);
      worst_z = std::max(worst_z, std::fabs(counts[i] / N - probs[i]) / se);
    }
    rec.add("rsk", params, worst_z, 3.0, worst_z <= 3.0);
  });
}

void check_kdv(const VerifyConfig& cfg, CheckRecorder& rec) {
  const std::vector<double> eps_list =
      cfg.quick ? std::vector<double>{0.4, 0.3} : std::vector<double>{0.4, 0.3, 0.2};
  nlohmann::json params = {{"x", 0.0}, {"t", 1.0}, {"eps", eps_list}};
  rec.guarded("kdv", params, [&] {
    const auto pts = kdv_residual_diagnostic(0.0, 1.0, eps_list, fermi_family(1.0));
    bool decreasing = true;
    nlohmann::json seq = nlohmann::json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      seq.push_back(std::fabs(pts[i].residual));
      if (i > 0 && !(std::fabs(pts[i].residual) < std::fabs(pts[i - 1].residual)))
        decreasing = false;
    }
    nlohmann::json p2 = params;
    p2["residuals"] = seq;
    rec.add("kdv", p2, std::fabs(pts.back().residual), std::fabs(pts.front().residual),
            decreasing);
  });
}

}  // namespace

int run_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err) {
  CheckRecorder rec;
  const std::string& c = cfg.check;
  const bool all = c == "all";
  bool known = all;

  auto want = [&](const char* name) { return all || c == name; };
  if (want("anchors")) known = true, check_anchors(cfg, rec);
  if (want("toeplitz")) known = true, check_toeplitz(cfg, rec);
  if (want("toda")) known = true, check_toda(cfg, rec);
  if (want("variational")) known = true, check_variational(cfg, rec);
  if (want("idpii")) known = true, check_idpii(cfg, rec);
  if (want("phi")) known = true, check_phi_asymptotics(cfg, rec);
  if (want("dpii")) known = true, check_dpii(cfg, rec);
  if (want("volterra")) known = true, check_volterra(cfg, rec);
  if (want("smalll")) known = true, check_smalll(cfg, rec);
  if (want("ratio")) known = true, check_ratio(cfg, rec);
  if (want("mc")) known = true, check_mc(cfg, rec);
  if (want("rsk")) known = true, check_rsk(cfg, rec);
  if (want("kdv")) known = true, check_kdv(cfg, rec);
  if (!known) throw config_error("unknown check \"" + c + "\"");

  out << rec.reports.dump(2) << "\n";
  for (const auto& r : rec.reports)
    if (!r["pass"].get<bool>())
      err << "FAIL " << r["check"].get<std::string>() << " "
          << (r.contains("error") ? r["error"].get<std::string>() : r["params"].dump()) << "\n";

  if (rec.resource_hit) return kExitResource;
  return rec.all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace tbl
