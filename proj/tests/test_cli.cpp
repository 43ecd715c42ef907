// End-to-end tests for the command-line tool: spawns the real binary and
// checks output, exit codes, and byte-level reproducibility.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "hartogs/scenarios.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/hartogs_cli_test.out";
  const std::string err_path = "/tmp/hartogs_cli_test.err";
  const std::string cmd =
      std::string(HARTOGS_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("list enumerates every scenario") {
  const auto r = run_cli("list");
  REQUIRE(r.status == 0);
  for (const auto& info : hartogs::scenario_catalog()) {
    INFO(info.id);
    CHECK(contains(r.out, std::string(info.id) + "\n"));
  }
  const auto flag = run_cli("--list");
  REQUIRE(flag.status == 0);
  CHECK(flag.out == r.out);
}

TEST_CASE("verify tmu passes and reports the exact boundary ratio") {
  const auto r = run_cli("verify tmu --mu-max 64");
  REQUIRE(r.status == 0);
  CHECK(contains(r.out, "\"verdict\": \"Pass\""));
  CHECK(contains(r.out, "65/66"));
  CHECK(contains(r.out, "\"mu_max\": \"64\""));
}

TEST_CASE("verify counterexample accepts a decimal exponent") {
  const auto r = run_cli("verify counterexample --p 1.25");
  REQUIRE(r.status == 0);
  CHECK(contains(r.out, "\"verdict\": \"Pass\""));
  // q = 5 puts the dual norm in the power-law regime with exponent q - 4 = 1.
  CHECK(contains(r.out, "qnorm_power_exponent"));
}

TEST_CASE("invalid invocations exit with status 2 and a diagnostic") {
  const auto unknown = run_cli("verify frobnicate");
  CHECK(unknown.status == 2);
  CHECK(contains(unknown.err, "unknown scenario"));

  const auto bad_flag = run_cli("verify tmu --frobs 3");
  CHECK(bad_flag.status == 2);

  const auto bad_value = run_cli("verify tmu --mu-max banana");
  CHECK(bad_value.status == 2);
  CHECK(contains(bad_value.err, "mu_max"));

  const auto bad_range = run_cli("verify counterexample --p 2");
  CHECK(bad_range.status == 2);
  CHECK(contains(bad_range.err, "p must lie in (1, 4/3]"));

  const auto bad_f = run_cli("norm --f bogus --p 2");
  CHECK(bad_f.status == 2);
  CHECK(contains(bad_f.err, "parameter 'f'"));

  const auto bare = run_cli("");
  CHECK(bare.status == 2);
}

TEST_CASE("norm reports the divergent dual norm of 1/z1 at p = 4") {
  const auto r = run_cli("norm --f inv-z1 --p 4 --weight none");
  REQUIRE(r.status == 0);
  CHECK(contains(r.out, "f,domain,p,weight,value,error_estimate,verdict,kind,rate"));
  CHECK(contains(r.out, ",Diverged,logarithmic,"));
  CHECK(contains(r.out, "2*pi^2"));
}

TEST_CASE("norm quotes function names that contain commas") {
  const auto r = run_cli("norm --f monomial:0,0 --p 2");
  REQUIRE(r.status == 0);
  CHECK(contains(r.out, "\"monomial:0,0\",hartogs,2,"));
  CHECK(contains(r.out, "1/2*pi^2"));
}

TEST_CASE("project agrees between exact and numeric backends") {
  const auto exact = run_cli("project --f counterexample --m-min -2 --m-max 2 --n-max 2");
  REQUIRE(exact.status == 0);
  // The exact expansion has a single row: the (-1, 0) coefficient 15/32.
  CHECK(exact.out == "m,n,re,im,exact\n-1,0,0.46875,0,15/32\n");

  const auto numeric =
      run_cli("project --f counterexample --backend numeric --m-min -2 --m-max 2 --n-max 2");
  REQUIRE(numeric.status == 0);
  std::istringstream lines(numeric.out);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  int m = 0, n = 0;
  double re = 0, im = 0;
  REQUIRE(std::sscanf(row.c_str(), "%d,%d,%lf,%lf", &m, &n, &re, &im) == 4);
  CHECK(m == -1);
  CHECK(n == 0);
  CHECK(std::abs(re - 0.46875) < 1e-8);
  CHECK(std::abs(im) < 1e-8);
}

TEST_CASE("scan sweeps the dual exponent across the divergence threshold") {
  const auto r = run_cli("scan --f inv-z1 --param q --from 3 --to 6 --steps 7");
  REQUIRE(r.status == 0);
  CHECK(contains(r.out, "q,value,error_estimate,verdict,kind,rate"));
  CHECK(contains(r.out, "\n7/2,"));          // exact rational grid
  CHECK(contains(r.out, ",Exact,none,"));    // below the threshold
  CHECK(contains(r.out, "\n4,inf,inf,Diverged,logarithmic,"));
  CHECK(contains(r.out, "\n5,inf,inf,Diverged,power-law,1\n"));
}

TEST_CASE("verify report reruns byte-identically from its embedded config") {
  const std::string first = "/tmp/hartogs_cli_test_r1.json";
  const std::string second = "/tmp/hartogs_cli_test_r2.json";
  const std::string ini = "/tmp/hartogs_cli_test_rerun.ini";

  auto r1 = run_cli("verify tmu right-inverse --trials 7 --out " + first);
  REQUIRE(r1.status == 0);
  const auto report = nlohmann::json::parse(slurp(first));
  std::ofstream(ini) << report.at("config").get<std::string>();

  auto r2 = run_cli("verify --config " + ini + " --out " + second);
  REQUIRE(r2.status == 0);
  CHECK(slurp(first) == slurp(second));
}

TEST_CASE("flags win over config-file values") {
  const std::string ini = "/tmp/hartogs_cli_test_flags.ini";
  std::ofstream(ini) << "[global]\nformat = csv\n\n[tmu]\nmu_max = 64\n";
  const auto r = run_cli("verify tmu --config " + ini + " --mu-max 16");
  REQUIRE(r.status == 0);
  CHECK(contains(r.out, "tmu,mu_max=16,"));      // flag overrode the section
  CHECK(contains(r.out, "scenario,parameters")); // config picked the csv format
}

TEST_CASE("worker count does not change the report bytes") {
  const auto one = run_cli("verify orthogonality duality-chain --samples 6");
  REQUIRE(one.status == 0);
  const auto four = run_cli("--workers 4 verify orthogonality duality-chain --samples 6");
  REQUIRE(four.status == 0);
  CHECK(one.out == four.out);
}
