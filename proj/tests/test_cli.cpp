#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("ineq_lab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Run run(const std::string& args, const fs::path& dir) {
  auto log = dir / "stdout.txt";
  std::string cmd = std::string("\"") + INEQ_LAB_BIN + "\" " + args + " --out \"" +
                    dir.string() + "\" >\"" + log.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream os;
  os << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json report(const fs::path& p) { return Json::parse(slurp(p)); }

}  // namespace

TEST_CASE("constants for alpha = x^2, A = 1, lambda = 1/2") {
  auto dir = scratch("constants");
  auto r = run("constants --alpha power:2,2 --A 1 --lambda 0.5", dir);
  REQUIRE(r.code == 0);
  auto j = report(dir / "constants.json");
  CHECK(j["schema"] == 1);
  CHECK(j["verdict"] == "PASS");
  const auto& c = j["result"];
  CHECK(c["C_plus"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c["C_minus"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c["kappa"].get<double>() == 4.0);
  CHECK(c["kappa_tilde"].get<double>() == 16.0);
  CHECK(c["t_alpha"] == "inf");
}

TEST_CASE("xi-table csv agrees with the closed form") {
  auto dir = scratch("xi");
  auto r = run("xi-table --alpha power:3,2 --grid 0.01:10:200", dir);
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "xi-table.xi_table.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "x,xi_closed,xi_numeric,rel_diff,xi_upper_bound");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    CHECK(v[3] <= 1e-5);
    CHECK(v[1] <= v[4] * (1 + 1e-9));
    ++rows;
  }
  CHECK(rows == 200);
}

TEST_CASE("malformed weights are a config error naming the sum") {
  auto dir = scratch("weights");
  auto r = run("estimate T --space '{\"generator\":\"path\",\"count\":3}' "
               "--measure weights:0.3,0.3,0.3 --seed 1",
               dir);
  CHECK(r.code == 1);
  CHECK(r.out.find("weights sum to 0.9") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "estimate-T.json"));
}

TEST_CASE("searches refuse to run without a seed") {
  auto dir = scratch("seed");
  auto r = run("verify T-to-tauLSI --space '{\"generator\":\"path\",\"count\":2}'", dir);
  CHECK(r.code == 1);
  CHECK(r.out.find("--seed is required") != std::string::npos);
}

TEST_CASE("bad JSON config reports line and column") {
  auto dir = scratch("json");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << "{\n  \"alpha\": \"quadratic\",\n  \"A\": ,\n}\n";
  }
  auto r = run("constants --config \"" + (dir / "cfg.json").string() + "\"", dir);
  CHECK(r.code == 1);
  CHECK(r.out.find("cfg.json:3:") != std::string::npos);
}

TEST_CASE("flags override the config file") {
  auto dir = scratch("override");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"alpha": "power:2,2", "A": 1, "lambda": 0.25})";
  }
  auto r = run("constants --config \"" + (dir / "cfg.json").string() + "\" --lambda 0.5", dir);
  REQUIRE(r.code == 0);
  auto j = report(dir / "constants.json");
  CHECK(j["result"]["lambda"].get<double>() == 0.5);
}

TEST_CASE("same seed gives byte-identical reports") {
  auto a = scratch("det_a"), b = scratch("det_b");
  std::string args =
      "verify T-to-tauLSI --space '{\"generator\":\"path\",\"count\":3,\"spacing\":0.7}' "
      "--measure weights:0.2,0.5,0.3 --alpha power:3,2 --seed 11 --starts 4 --iterations 60 "
      "--no-dense --quiet";
  auto ra = run(args, a), rb = run(args, b);
  REQUIRE(ra.code == rb.code);
  CHECK(ra.code != 1);
  CHECK(slurp(a / "verify-T-to-tauLSI.json") == slurp(b / "verify-T-to-tauLSI.json"));
  CHECK(slurp(a / "verify-T-to-tauLSI.steps.csv") == slurp(b / "verify-T-to-tauLSI.steps.csv"));
}

TEST_CASE("validate-space flags a triangle violation") {
  auto dir = scratch("validate");
  auto r = run("validate-space --space "
               "'{\"labels\":[\"a\",\"b\",\"c\"],\"dist\":[[0,1,5],[1,0,1],[5,1,0]]}'",
               dir);
  CHECK(r.code == 2);
  auto j = report(dir / "validate-space.json");
  CHECK(j["verdict"] == "FAIL");
  CHECK(j["result"]["valid"] == false);
  bool triangle = false;
  for (const auto& d : j["result"]["diagnostics"]) triangle = triangle || d["axiom"] == "triangle";
  CHECK(triangle);

  auto ok = run("validate-space --space '{\"generator\":\"cycle\",\"count\":5}'", dir);
  CHECK(ok.code == 0);
}

TEST_CASE("transport writes a plan whose mass matches the marginals") {
  auto dir = scratch("transport");
  auto r = run("transport --space '{\"generator\":\"path\",\"count\":3}' "
               "--nu weights:0.5,0.5,0 --quiet",
               dir);
  REQUIRE(r.code == 0);
  auto j = report(dir / "transport.json");
  CHECK(j["result"]["cost"].get<double>() == doctest::Approx(0.5));
  CHECK(j["result"]["brute_force_cost"].get<double>() == doctest::Approx(0.5));
  CHECK(fs::exists(dir / "transport.transport_plan.csv"));
}

TEST_CASE("dual check exits 2 when a violation is found") {
  auto dir = scratch("dual");
  auto r = run("verify dual --space '{\"generator\":\"path\",\"count\":2}' "
               "--measure weights:0.4,0.6 --c 0.5 --seed 2 --quiet",
               dir);
  CHECK(r.code == 2);
  auto j = report(dir / "verify-dual.json");
  CHECK(j["result"]["violated"] == true);
}

TEST_CASE("unknown subcommand arguments are config errors") {
  auto dir = scratch("unknown");
  CHECK(run("estimate Foo --space '{\"generator\":\"path\",\"count\":2}' --seed 1", dir).code == 1);
  CHECK(run("constants --lambda abc", dir).code == 1);
  CHECK(run("constants --alpha power:0.5,2", dir).code == 1);
}
