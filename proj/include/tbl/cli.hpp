#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tbl/sigma.hpp"

namespace tbl {

// exit-code contract
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;

struct ComputeConfig {
  SigmaProfile sigma = SigmaProfile::indicator();
  std::vector<double> L_grid;
  std::vector<HalfInt> s_range;
  double eps = 1e-12;
  std::string format = "csv";  // csv | json
};

struct VerifyConfig {
  std::string check = "all";  // anchors toeplitz toda variational idpii phi dpii
                              // volterra smalll ratio mc rsk kdv all
  SigmaProfile sigma = SigmaProfile::indicator();
  bool sigma_given = false;
  std::vector<double> L_grid;
  std::vector<HalfInt> s_range;
  bool s_given = false;
  HalfInt s_max{15};
  double h = 1e-2;
  double tol = 0.0;  // 0: per-check default
  double eps = 1e-12;
  std::int64_t samples = 100000;
  std::uint64_t seed = 20250810;
  bool quick = false;
  std::string format = "json";
};

/// Inclusive lattice range "a..b" (step 1) or comma list of "p/2" values.
std::vector<HalfInt> parse_s_spec(const std::string& spec);
/// Comma list of reals.
std::vector<double> parse_L_spec(const std::string& spec);
/// "indicator" | "fermi:<u>" | "fermi" (u supplied separately) | "zero".
SigmaProfile parse_sigma_spec(const std::string& spec, double u_flag);

/// Q sweep as CSV (or JSON): sigma_id, L, s, q, trunc_err, window_lo, window_hi.
/// Deterministic row order (L-major, then s), byte-identical per config.
int run_compute(const ComputeConfig& cfg, std::ostream& out, std::ostream& err);

/// Named verification checks; one JSON object per check with residual,
/// tolerance and pass flag. Exit code 0 iff all ran and passed.
int run_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace tbl
