#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "taildep/cli.hpp"
#include "taildep/estimators.hpp"

using namespace taildep;
using cli::Json;

namespace {

const std::string kBin = TAILDEP_BIN;
const std::string kDir = "cli_scratch";

struct RunResult {
  int exit_code = 0;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string out_file = kDir + "/cmd.out";
  const std::string cmd = kBin + " " + args + " > " + out_file + " 2>" + kDir + "/cmd.err";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream f(out_file, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
}

void mkdirs() {
  const int rc = std::system(("mkdir -p " + kDir).c_str());
  REQUIRE(rc == 0);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kSimulateCfg = R"({
  "model": {"family": "gaussian_chi", "correlation": [[1, 0.5], [0.5, 1]]},
  "n": 1000,
  "seed": 7,
  "out": "cli_scratch/sample.csv"
})";

}  // namespace

TEST_CASE("config validation rejects unknown keys and bad values") {
  cli::Overrides ov;
  Json cfg = Json::parse(kSimulateCfg);
  CHECK_NOTHROW(cli::resolve_config("simulate", cfg, ov));
  cfg["extra"] = 1;
  CHECK_THROWS_AS(cli::resolve_config("simulate", cfg, ov), cli::ConfigError);

  Json bad = Json::parse(kSimulateCfg);
  bad["model"]["family"] = "cauchy";
  CHECK_THROWS_AS(cli::model_from_config(cli::resolve_config("simulate", bad, ov)["model"]),
                  cli::ConfigError);

  Json nokey = Json::parse(kSimulateCfg);
  nokey.erase("seed");
  CHECK_THROWS_AS(cli::resolve_config("simulate", nokey, ov), cli::ConfigError);
}

TEST_CASE("report JSON round-trips losslessly and validates") {
  TailReport r;
  r.n = 1000;
  r.k = 3;
  r.k_n = 15;
  r.theta = 1.25;
  r.c_literal = 0.9;
  r.c_corrected = 1.05;
  r.pairs = {{0, 1, 0.333, 0.5, 0.82}, {0, 2, -0.1, -0.15, 0.77}};
  SubsetEntry s;
  s.index_set = {0, 1, 2};
  s.q = 1.5;
  s.active_set = {0, 1, 2};
  s.minimizer = {1.0, 1.0, 1.0};
  s.mu = {0.5, 0.5, 0.5};
  s.eta = 0.77;
  s.eta_literal = 0.6;
  s.trivariate_branch = 'A';
  r.subsets = {s};
  r.empirical_s = {{20.0, {1.0, 1.0}, 0.0025, 25}};
  r.empirical_chi = {{20.0, 0.05}};
  r.seed = 42;
  r.source = "csv:test.csv";

  const Json j = cli::report_to_json(r);
  CHECK_NOTHROW(cli::validate_report_json(j));
  const TailReport back = cli::report_from_json(j);
  CHECK(cli::report_to_json(back) == j);

  Json broken = j;
  broken.erase("theta");
  CHECK_THROWS_AS(cli::validate_report_json(broken), cli::ConfigError);
}

TEST_CASE("simulate: byte-identical CSV under a repeated seed, format contract") {
  mkdirs();
  write_file(kDir + "/sim.json", kSimulateCfg);

  const RunResult r1 = run("simulate --config " + kDir + "/sim.json");
  REQUIRE(r1.exit_code == 0);
  const std::string first = slurp(kDir + "/sample.csv");
  CHECK(first.substr(0, 6) == "x1,x2\n");
  CHECK(std::count(first.begin(), first.end(), '\n') == 1001);

  const RunResult r2 = run("simulate --config " + kDir + "/sim.json");
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(kDir + "/sample.csv") == first);

  // sidecar echoes the resolved config
  const Json meta = Json::parse(slurp(kDir + "/sample.csv.meta.json"));
  CHECK(meta.at("config").at("seed").get<int>() == 7);
  CHECK(meta.at("columns").get<int>() == 2);

  // different seed changes the bytes
  const RunResult r3 = run("simulate --config " + kDir + "/sim.json --seed 8");
  REQUIRE(r3.exit_code == 0);
  CHECK(slurp(kDir + "/sample.csv") != first);
}

TEST_CASE("simulate: trivariate header and config errors") {
  mkdirs();
  write_file(kDir + "/tri.json", R"({
    "model": {"family": "kotz", "params": {"theta": 1},
              "correlation": [[1, 0.3, 0.2], [0.3, 1, 0.1], [0.2, 0.1, 1]]},
    "n": 50, "seed": 3, "out": "cli_scratch/tri.csv"
  })");
  REQUIRE(run("simulate --config " + kDir + "/tri.json").exit_code == 0);
  CHECK(slurp(kDir + "/tri.csv").substr(0, 9) == "x1,x2,x3\n");

  write_file(kDir + "/bad.json", R"({
    "model": {"family": "gaussian_chi", "correlation": [[1, 1.2], [1.2, 1]]},
    "n": 10, "seed": 1, "out": "cli_scratch/bad.csv"
  })");
  CHECK(run("simulate --config " + kDir + "/bad.json").exit_code == 2);
}

TEST_CASE("estimate: recovers rho on simulated data; bad input exits 2") {
  mkdirs();
  write_file(kDir + "/sim_big.json", R"({
    "model": {"family": "gaussian_chi", "correlation": [[1, 0.5], [0.5, 1]]},
    "n": 100000, "seed": 7, "out": "cli_scratch/big.csv"
  })");
  REQUIRE(run("simulate --config " + kDir + "/sim_big.json").exit_code == 0);

  write_file(kDir + "/est.json", R"({
    "input": "cli_scratch/big.csv",
    "u_levels": [50],
    "x_table": [[1, 1]]
  })");
  const RunResult er = run("estimate --config " + kDir + "/est.json");
  REQUIRE(er.exit_code == 0);
  const Json j = Json::parse(er.out);
  CHECK_NOTHROW(cli::validate_report_json(j.at("report")));
  const double rho = j.at("report").at("pairs").at(0).at("rho").get<double>();
  CHECK(std::fabs(rho - 0.5) < 0.02);
  CHECK(j.at("report").at("k_n").get<int>() > 0);
  CHECK(j.at("report").at("empirical_chi").at(0).at("chi").get<double>() > 0.0);

  write_file(kDir + "/one.csv", "x1\n1.0\n2.0\n");
  write_file(kDir + "/est_one.json", R"({"input": "cli_scratch/one.csv"})");
  CHECK(run("estimate --config " + kDir + "/est_one.json").exit_code == 2);

  write_file(kDir + "/mal.csv", "x1,x2\n1.0,2.0\n3.0,oops\n");
  write_file(kDir + "/est_mal.json", R"({"input": "cli_scratch/mal.csv"})");
  CHECK(run("estimate --config " + kDir + "/est_mal.json").exit_code == 2);
}

TEST_CASE("alpha: lemma example and both eta conventions") {
  mkdirs();
  write_file(kDir + "/alpha.json", R"({
    "correlation": [[1, -0.5, 0.3], [-0.5, 1, 0.3], [0.3, 0.3, 1]],
    "theta": 1.0
  })");
  const RunResult r = run("alpha --config " + kDir + "/alpha.json");
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  const Json& e = j.at("results").at(0);
  CHECK(e.at("K") == Json::array({1, 2}));
  CHECK(e.at("q").get<double>() == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(e.at("minimizer").at(2).get<double>() == doctest::Approx(1.2).epsilon(1e-10));
  CHECK(e.at("eta").at("adopted").get<double>() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(e.at("eta").at("paper_literal").get<double>() == doctest::Approx(0.25).epsilon(1e-10));

  write_file(kDir + "/alpha_id.json", R"({
    "correlation": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "theta": 1.0
  })");
  const Json jid = Json::parse(run("alpha --config " + kDir + "/alpha_id.json").out);
  CHECK(jid.at("results").at(0).at("eta").at("adopted").get<double>() ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(jid.at("results").at(0).at("eta").at("paper_literal").get<double>() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // theta = 0: both conventions give 1
  write_file(kDir + "/alpha_t0.json", R"({
    "correlation": [[1, 0.5, 0.5], [0.5, 1, 0.5], [0.5, 0.5, 1]],
    "theta": 0.0
  })");
  const Json j0 = Json::parse(run("alpha --config " + kDir + "/alpha_t0.json").out);
  CHECK(j0.at("results").at(0).at("eta").at("adopted").get<double>() == 1.0);
  CHECK(j0.at("results").at(0).at("eta").at("paper_literal").get<double>() == 1.0);

  // non-PD input exits 2
  write_file(kDir + "/alpha_bad.json", R"({
    "correlation": [[1, -0.6, -0.6], [-0.6, 1, -0.6], [-0.6, -0.6, 1]],
    "theta": 1.0
  })");
  CHECK(run("alpha --config " + kDir + "/alpha_bad.json").exit_code == 2);
}

TEST_CASE("oracle: slope on the independent Gaussian and divergence table") {
  mkdirs();
  write_file(kDir + "/oracle.json", R"({
    "model": {"family": "gaussian_chi", "correlation": [[1, 0], [0, 1]]},
    "u_grid": [1e3, 1e4, 1e5, 1e6, 1e7],
    "x_pairs": [[0.5, 0.5]],
    "levels": [1.0, 2.0]
  })");
  const RunResult r = run("oracle --config " + kDir + "/oracle.json");
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  CHECK(std::fabs(j.at("slope").at("value").get<double>() + 2.0) < 1e-6);
  CHECK(j.at("table").size() == 5);
  CHECK(j.at("chi").size() == 2);
  // independent Gaussian: S_u(0.5, 0.5) = 0.25 exactly in the limit and at
  // finite u
  CHECK(j.at("table").at(0).at("s_u").at(0).at("value").get<double>() ==
        doctest::Approx(0.25).epsilon(1e-5));

  write_file(kDir + "/oracle_div.json", R"({
    "model": {"family": "exp_scaling", "params": {"a": 1},
              "correlation": [[1, -0.5], [-0.5, 1]]},
    "u_grid": [1e2, 1e3, 1e4],
    "x_pairs": [[0.5, 0.5]]
  })");
  const RunResult rd = run("oracle --config " + kDir + "/oracle_div.json");
  REQUIRE(rd.exit_code == 0);
  const Json jd = Json::parse(rd.out);
  const double s0 = jd.at("table").at(0).at("s_u").at(0).at("value").get<double>();
  const double s2 = jd.at("table").at(2).at("s_u").at(0).at("value").get<double>();
  CHECK(s2 < s0);
}

TEST_CASE("estimate reports are reproducible from the echoed config") {
  mkdirs();
  write_file(kDir + "/est2.json", R"({
    "input": "cli_scratch/big.csv",
    "kn": 50
  })");
  const RunResult a = run("estimate --config " + kDir + "/est2.json");
  REQUIRE(a.exit_code == 0);
  const Json ja = Json::parse(a.out);
  // re-run from the echoed config
  write_file(kDir + "/est2_echo.json", ja.at("config").dump());
  const RunResult b = run("estimate --config " + kDir + "/est2_echo.json");
  REQUIRE(b.exit_code == 0);
  Json jb = Json::parse(b.out);
  Json jaa = ja;
  jaa.erase("generated_at");
  jb.erase("generated_at");
  CHECK(jaa == jb);
}

TEST_CASE("usage errors exit 2") {
  mkdirs();
  CHECK(run("estimate").exit_code == 2);              // missing --config
  CHECK(run("frobnicate --config x.json").exit_code == 2);
  write_file(kDir + "/garbage.json", "{ not json");
  CHECK(run("simulate --config " + kDir + "/garbage.json").exit_code == 2);
}

TEST_CASE("verify: quick battery passes and lists each criterion once") {
  mkdirs();
  const RunResult r = run("verify");
  CHECK(r.exit_code == 0);
  for (int id = 1; id <= 12; ++id) {
    char tag[8];
    std::snprintf(tag, sizeof tag, "C%02d ", id);
    std::size_t count = 0, pos = 0;
    while ((pos = r.out.find(tag, pos)) != std::string::npos) {
      ++count;
      ++pos;
    }
    CAPTURE(id);
    CHECK(count == 1);
  }
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  CHECK(r.out.find("ALL CRITERIA PASSED") != std::string::npos);
}
