#include <doctest.h>

#include "config.hpp"
#include "runner.hpp"
#include "verify.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace infogeo;
using namespace infogeo::cli;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("infogeo_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the installed binary with stdout and stderr discarded; returns the exit status.
int run_cli(const std::string& args) {
  const std::string cmd = std::string(INFOGEO_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config round trip") {
  RunConfig c;
  c.family = "kaniadakis";
  c.grid = {12.0, 401};
  c.basis = {"polynomial", 4};
  c.time.T = 2.0;
  c.prior.dense_init = "exact";
  c.geometry.densities = {{"gaussian", 0.5, 2.0, 1.0}, {"constant", 0.0, 1.0, 3.0},
                          {"laplace", -1.0, 0.5, 1.0}};
  c.counterexample.alpha_order = 4;
  const RunConfig once = parse_config(to_json(c));
  CHECK(once == c);
  CHECK(parse_config(to_json(once)) == once);
  CHECK(to_json(once) == to_json(c));
  CHECK(parse_config(json::object()) == RunConfig{});
}

TEST_CASE("schema errors name the key path") {
  auto message = [](const json& j) {
    try {
      parse_config(j);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message({{"grid", {{"foo", 1}}}}) == "grid.foo: unknown key");
  CHECK(message({{"bar", 1}}) == "bar: unknown key");
  CHECK(message({{"time", {{"dt", "x"}}}}) == "time.dt: expected a number");
  CHECK(message({{"grid", {{"n", 800}}}}).rfind("grid.n:", 0) == 0);
  CHECK(message({{"time", {{"dt", 1.5e-4}}}}).rfind("time.dt:", 0) == 0);
  CHECK(message({{"model", {{"name", "linear"}, {"params", {{"G", 1.0}}}}}}).rfind("model:", 0) ==
        0);
  CHECK(message({{"geometry", {{"densities", {{{"kind", "cauchy"}}}}}}}) ==
        "geometry.densities[0].kind: must be gaussian, laplace, reference or constant");
  CHECK(message({{"version", "2"}}).rfind("version:", 0) == 0);
  CHECK(message({{"measure", {{"t", 0.5}, {"variant", "simple"}}}}).rfind("measure:", 0) == 0);
}

TEST_CASE("geometry report for constant densities") {
  RunConfig c;
  c.geometry.densities = {{"constant", 0.0, 1.0, 2.0}, {"constant", 0.0, 1.0, 1.0}};
  const json r = geometry_report(c);
  CHECK(std::abs(r["kl_PQ"].get<double>() - (2 * std::log(2.0) - 1)) < 1e-10);
  CHECK(std::abs(r["kl_QP"].get<double>() - (1 - std::log(2.0))) < 1e-10);
  CHECK(std::abs(r["symmetric_kl"].get<double>() - std::log(2.0)) < 1e-10);

  const auto dir = scratch("geometry");
  std::ofstream(dir / "cfg.json") << to_json(c).dump();
  REQUIRE(run_cli("geometry --config " + (dir / "cfg.json").string() + " --out " +
                  (dir / "out").string()) == 0);
  const json file = json::parse(slurp(dir / "out" / "geometry.json"));
  CHECK(file == r);
}

TEST_CASE("counterexample CSV") {
  const auto dir = scratch("counterexample");
  REQUIRE(run_cli("counterexample --out " + dir.string()) == 0);
  const std::string csv = slurp(dir / "counterexample.csv");
  CHECK(csv.rfind("n,A_n,B_n,ratio_A,ratio_B,", 0) == 0);
  CHECK(count_lines(csv) == 31);
  CHECK(run_cli("counterexample --k 1 --lambda 2 --terms 5") == 0);
  CHECK(run_cli("counterexample --terms 0") == 2);
  CHECK(run_cli("counterexample --k 5") == 2);
}

TEST_CASE("filter run populates the Kalman columns") {
  RunConfig c;
  c.grid = {8.0, 161};
  c.time.T = 0.2;
  const auto dir = scratch("filter");
  std::ofstream(dir / "cfg.json") << to_json(c).dump();
  REQUIRE(run_cli("filter --config " + (dir / "cfg.json").string() + " --out " +
                  (dir / "out").string() + " --trials 2 --seed 5") == 0);
  const std::string csv = slurp(dir / "out" / "trial_1.csv");
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "t,mass,mean_proj,var_proj,mean_dense,var_dense,mean_kb,var_kb,kl_dp,kl_pd,dmo");
  int rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    CHECK(row.find("nan") == std::string::npos);
  }
  CHECK(rows == 21);
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  CHECK(summary["failed"] == 0);
  CHECK(summary["trials"][1]["seed"] == trial_seed(5, 1));
  CHECK(parse_config(summary["config"]) == c);
}

TEST_CASE("outputs do not depend on the thread count") {
  RunConfig c;
  c.grid = {8.0, 161};
  c.time.T = 0.1;
  const auto dir = scratch("threads");
  std::ofstream(dir / "cfg.json") << to_json(c).dump();
  const std::string base = "filter --config " + (dir / "cfg.json").string() + " --trials 3 --out ";
  REQUIRE(run_cli(base + (dir / "a").string() + " --threads 1") == 0);
  REQUIRE(run_cli(base + (dir / "b").string() + " --threads 3") == 0);
  for (const char* f : {"summary.json", "trial_0.csv", "trial_1.csv", "trial_2.csv"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
}

TEST_CASE("verify exit codes") {
  const auto dir = scratch("verify");
  CHECK(run_cli("verify --filter deformed --out " + dir.string()) == 0);
  json ok = json::parse(slurp(dir / "verify.json"));
  CHECK(ok["failed"] == 0);
  CHECK(ok["passed"] == 5);

  CHECK(run_cli("verify --filter deformed --inject-fault psi2 --out " + dir.string()) == 1);
  json bad = json::parse(slurp(dir / "verify.json"));
  REQUIRE(bad["failures"].size() == 1);
  CHECK(bad["failures"][0]["property"] == "deformed.derivative_fd");

  CHECK(run_cli("verify --filter manifold --inject-fault psi2 --out " + dir.string()) == 1);
  bad = json::parse(slurp(dir / "verify.json"));
  REQUIRE(bad["failures"].size() == 1);
  CHECK(bad["failures"][0]["property"] == "manifold.faa_di_bruno");

  CHECK(run_cli("verify --filter nosuchmodule") == 2);
  CHECK(run_cli("verify --inject-fault bogus") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("filter --config /nonexistent.json") == 2);
}

TEST_CASE("every registered property passes on a clean build") {
  const auto rep = run_verify("", {});
  CHECK(rep.failed == 0);
  for (const auto& f : rep.json["failures"]) {
    CAPTURE(f.dump());
    CHECK(false);
  }
  CHECK_THROWS_AS(run_verify("nope", {}), DomainError);
}

}
