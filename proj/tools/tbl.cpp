#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tbl/cli.hpp"
#include "tbl/errors.hpp"

namespace {

struct CommonFlags {
  std::string sigma_spec = "indicator";
  double u = -1.0;
  std::string sigma_file;
  std::string L_spec;
  std::string s_spec;
  std::string out_path;
  std::string format;
};

tbl::SigmaProfile resolve_sigma(const CommonFlags& f) {
  if (!f.sigma_file.empty()) {
    std::ifstream in(f.sigma_file);
    if (!in) throw tbl::config_error("cannot open sigma file " + f.sigma_file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return tbl::SigmaProfile::from_json(text);
  }
  return tbl::parse_sigma_spec(f.sigma_spec, f.u);
}

int with_output(const std::string& path, const std::function<int(std::ostream&)>& fn) {
  if (path.empty()) return fn(std::cout);
  std::ofstream out(path);
  if (!out) throw tbl::config_error("cannot open output file " + path);
  return fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-temperature discrete Bessel gap probabilities and their integrable checks"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h/"h" for the step flag

  CommonFlags cf, vf;

  auto* compute = app.add_subcommand("compute", "sweep Q(L,s) over a grid, CSV/JSON out");
  compute->add_option("--sigma", cf.sigma_spec, "indicator | fermi:<u> | zero");
  compute->add_option("--u", cf.u, "fermi parameter when --sigma fermi");
  compute->add_option("--sigma-file", cf.sigma_file, "JSON profile file");
  compute->add_option("--L", cf.L_spec, "comma list of L values")->required();
  compute->add_option("--s", cf.s_spec, "lattice range a..b or comma list, entries p/2")->required();
  double eps = 1e-12;
  compute->add_option("--eps", eps, "determinant truncation budget");
  compute->add_option("--out", cf.out_path, "output path (default stdout)");
  compute->add_option("--format", cf.format, "csv | json")->default_str("csv");

  auto* verify = app.add_subcommand("verify", "run named identity checks, JSON report out");
  verify->set_help_flag("--help", "print help");
  std::string check = "all";
  verify->add_option("check", check,
                     "anchors|toeplitz|toda|variational|idpii|phi|dpii|volterra|smalll|ratio|mc|rsk|kdv|all");
  verify->add_option("--sigma", vf.sigma_spec, "restrict to one profile");
  verify->add_option("--u", vf.u, "fermi parameter when --sigma fermi");
  verify->add_option("--sigma-file", vf.sigma_file, "JSON profile file");
  verify->add_option("--L", vf.L_spec, "override L grid");
  verify->add_option("--s", vf.s_spec, "override s range");
  std::string s_max = "15/2";
  double h = 1e-2, tol = 0.0, veps = 1e-12;
  std::int64_t samples = 100000;
  std::uint64_t seed = 20250810;
  bool quick = false;
  verify->add_option("--s-max", s_max, "dPII horizon target");
  verify->add_option("--h", h, "finite-difference step");
  verify->add_option("--tol", tol, "override the per-check tolerance");
  verify->add_option("--eps", veps, "determinant truncation budget");
  verify->add_option("--samples", samples, "Monte Carlo sample count");
  verify->add_option("--seed", seed, "Monte Carlo master seed");
  verify->add_flag("--quick", quick, "trimmed grids for CI");
  verify->add_option("--out", vf.out_path, "output path (default stdout)");
  verify->add_option("--format", vf.format, "json");

  try {
    app.parse(argc, argv);

    if (compute->parsed()) {
      tbl::ComputeConfig cfg;
      cfg.sigma = resolve_sigma(cf);
      cfg.L_grid = tbl::parse_L_spec(cf.L_spec);
      cfg.s_range = tbl::parse_s_spec(cf.s_spec);
      cfg.eps = eps;
      if (!cf.format.empty()) cfg.format = cf.format;
      return with_output(cf.out_path,
                         [&](std::ostream& out) { return tbl::run_compute(cfg, out, std::cerr); });
    }

    tbl::VerifyConfig cfg;
    cfg.check = check;
    if (!vf.sigma_file.empty() || verify->count("--sigma") > 0 || vf.u >= 0.0) {
      cfg.sigma = resolve_sigma(vf);
      cfg.sigma_given = true;
    }
    if (!vf.L_spec.empty()) cfg.L_grid = tbl::parse_L_spec(vf.L_spec);
    if (!vf.s_spec.empty()) {
      cfg.s_range = tbl::parse_s_spec(vf.s_spec);
      cfg.s_given = true;
    }
    cfg.s_max = tbl::HalfInt::parse(s_max);
    cfg.h = h;
    cfg.tol = tol;
    cfg.eps = veps;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.quick = quick;
    return with_output(vf.out_path,
                       [&](std::ostream& out) { return tbl::run_verify(cfg, out, std::cerr); });
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tbl::kExitConfig;
  } catch (const tbl::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return tbl::kExitConfig;
  } catch (const tbl::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return tbl::kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tbl::kExitCheckFailed;
  }
}
