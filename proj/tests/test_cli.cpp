#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "tbl/cli.hpp"

using tbl::ComputeConfig;
using tbl::HalfInt;
using tbl::parse_L_spec;
using tbl::parse_s_spec;
using tbl::parse_sigma_spec;
using tbl::run_compute;
using tbl::run_verify;
using tbl::SigmaProfile;
using tbl::VerifyConfig;

TEST_CASE("lattice range parsing") {
  const auto r = parse_s_spec("-1/2..21/2");
  CHECK(r.size() == 12);
  CHECK(r.front().twice() == -1);
  CHECK(r.back().twice() == 21);
  const auto list = parse_s_spec("3/2,7/2");
  CHECK(list.size() == 2);
  CHECK_THROWS_AS(parse_s_spec("1/2..-1/2"), tbl::config_error);
  CHECK_THROWS_AS(parse_s_spec("0.5..1.5"), tbl::config_error);
  CHECK(parse_L_spec("0.5,1,2").size() == 3);
  CHECK_THROWS_AS(parse_L_spec("0,1"), tbl::config_error);
  CHECK(parse_sigma_spec("fermi:0.5", -1.0).kind() == SigmaProfile::Kind::fermi);
  CHECK(parse_sigma_spec("indicator", -1.0).kind() == SigmaProfile::Kind::indicator);
  CHECK_THROWS_AS(parse_sigma_spec("bogus", -1.0), tbl::config_error);
}

TEST_CASE("compute emits the specified CSV shape") {
  ComputeConfig cfg;
  cfg.sigma = SigmaProfile::indicator();
  cfg.L_grid = {1.0};
  cfg.s_range = parse_s_spec("-1/2..21/2");
  std::ostringstream out, err;
  CHECK(run_compute(cfg, out, err) == tbl::kExitOk);
  std::istringstream lines(out.str());
  std::string line;
  int rows = -1;  // header
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);
  CHECK(out.str().rfind("sigma_id,L,s,q,trunc_err,window_lo,window_hi", 0) == 0);
  // anchor value in column q of the first row
  std::istringstream again(out.str());
  std::getline(again, line);
  std::getline(again, line);
  CHECK(line.find("indicator,1,-0.5,0.36787944") == 0);
}

TEST_CASE("48-row fermi sweep and byte-identical determinism") {
  ComputeConfig cfg;
  cfg.sigma = SigmaProfile::fermi(0.5);
  cfg.L_grid = {0.5, 1.0, 2.0};
  cfg.s_range = parse_s_spec("-9/2..21/2");
  std::ostringstream a, b, err;
  CHECK(run_compute(cfg, a, err) == tbl::kExitOk);
  CHECK(run_compute(cfg, b, err) == tbl::kExitOk);
  CHECK(a.str() == b.str());
  int rows = -1;
  std::istringstream lines(a.str());
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 48);
}

TEST_CASE("compute rejects empty configuration") {
  ComputeConfig cfg;
  std::ostringstream out, err;
  CHECK_THROWS_AS(run_compute(cfg, out, err), tbl::config_error);
}

TEST_CASE("verify single checks pass and report JSON") {
  VerifyConfig cfg;
  cfg.check = "anchors";
  std::ostringstream out, err;
  CHECK(run_verify(cfg, out, err) == tbl::kExitOk);
  const auto reports = nlohmann::json::parse(out.str());
  REQUIRE(reports.is_array());
  for (const auto& r : reports) {
    CHECK(r["check"] == "anchors");
    CHECK(r["pass"].get<bool>());
    CHECK(r["residual"].get<double>() <= r["tolerance"].get<double>());
  }
}

TEST_CASE("verify dpii with explicit horizon") {
  VerifyConfig cfg;
  cfg.check = "dpii";
  cfg.s_max = HalfInt::parse("15/2");
  std::ostringstream out, err;
  CHECK(run_verify(cfg, out, err) == tbl::kExitOk);
  const auto reports = nlohmann::json::parse(out.str());
  CHECK(reports.size() == 1);
  CHECK(reports[0]["params"]["s_reached"].get<std::string>() >= std::string("15/2"));
}

TEST_CASE("verify toda on a single point") {
  VerifyConfig cfg;
  cfg.check = "toda";
  cfg.sigma = SigmaProfile::fermi(0.5);
  cfg.sigma_given = true;
  cfg.L_grid = {1.0};
  cfg.s_range = parse_s_spec("3/2");
  cfg.s_given = true;
  cfg.h = 1e-2;
  cfg.tol = 1e-6;
  std::ostringstream out, err;
  CHECK(run_verify(cfg, out, err) == tbl::kExitOk);
}

TEST_CASE("unknown check is a config error") {
  VerifyConfig cfg;
  cfg.check = "nonsense";
  std::ostringstream out, err;
  CHECK_THROWS_AS(run_verify(cfg, out, err), tbl::config_error);
}

TEST_CASE("failing tolerance propagates the exit code") {
  VerifyConfig cfg;
  cfg.check = "anchors";
  cfg.tol = 1e-18;  // unreachably tight
  std::ostringstream out, err;
  CHECK(run_verify(cfg, out, err) == tbl::kExitCheckFailed);
}
