#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "run_config.hpp"

using namespace gibbs::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gibbs-expand");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("gibbs_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  for (const std::string cmd : {"expand", "corr", "sqw", "cv", "validate"}) {
    RunConfig c = defaults_for(cmd);
    c.beta = 0.123456789012345;
    c.seed = 987654321987654321ull;
    c.orders = {"exact", "2", "sampled"};
    CHECK(from_json(to_json(c)) == c);
    CHECK(from_json(nlohmann::json::parse(to_json(c).dump())) == c);
  }
}

TEST_CASE("config validation messages") {
  RunConfig c = defaults_for("expand");
  CHECK_NOTHROW(validate(c));
  c.n = 6;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("cluster-size"), ConfigError);
  c.cluster_size = 3;
  c.cutoff = 7;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("cutoff"), ConfigError);
  c = defaults_for("corr");
  c.orders = {"four"};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = defaults_for("cv");
  c.beta_min = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_THROWS_AS(from_json(nlohmann::json{{"betaa", 1.0}}), ConfigError);
  CHECK_THROWS_AS(from_json(nlohmann::json{{"n", "four"}}), ConfigError);
}

TEST_CASE("cv defaults use the eight-site chain and a 40 point grid") {
  const auto c = defaults_for("cv");
  CHECK(c.n == 8);
  CHECK(c.cluster_size == 4);
  const auto grid = c.beta_grid();
  REQUIRE(grid.size() == 40);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(2.0));
}

TEST_CASE("expand reports lambda, bias bound and reassembly error") {
  const auto dir = scratch("expand");
  auto r = cli({"expand", "--n", "4", "--cutoff", "3", "--beta", "0", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("lambda 1\n") != std::string::npos);
  CHECK(r.out.find("bias_bound 0 ") != std::string::npos);
  r = cli({"expand", "--n", "4", "--cutoff", "4", "--beta", "0.8", "--out", dir.string()});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "expansion.json"));
  CHECK(doc["trace_norm_error"].get<double>() < 1e-10);
  r = cli({"expand", "--n", "8", "--cutoff", "3", "--beta", "0.8", "--out", dir.string()});
  CHECK(nlohmann::json::parse(slurp(dir / "expansion.json"))["terms"].size() == 4);
}

TEST_CASE("exit codes") {
  CHECK(cli({"expand", "--n", "5"}).code == kExitConfig);
  CHECK(cli({"expand", "--bogus"}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"corr", "--model", "heisenberg"}).code == kExitConfig);
  CHECK(cli({"expand", "--config", "/nonexistent/config.json"}).code == kExitConfig);
  CHECK(cli({"expand", "--help"}).code == 0);
}

TEST_CASE("validate passes and its negative control fails") {
  auto r = cli({"validate"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  r = cli({"validate", "--perturb-cumulant"});
  CHECK(r.code == kExitValidation);
  CHECK(r.out.find("FAIL cumulant telescoping") != std::string::npos);
}

TEST_CASE("corr and sqw write fixed CSV layouts, byte-identical across runs") {
  const auto a = scratch("corr_a");
  const auto b = scratch("corr_b");
  for (const auto& dir : {a, b}) {
    const auto r = cli({"corr", "--orders", "exact", "3", "sampled", "--shots", "300", "--seed", "4",
                        "--grid-steps", "6", "--t-max", "0.5", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(cli({"sqw", "--orders", "exact", "--grid-steps", "6", "--t-max", "0.5", "--out", dir.string()}).code == 0);
  }
  for (const std::string f : {"corr_exact.csv", "corr_order-3.csv", "corr_sampled.csv", "sqw_exact.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto corr = slurp(a / "corr_exact.csv");
  CHECK(corr.rfind("i,j,t,re,im\n0,0,0,1,0\n", 0) == 0);
  std::istringstream lines(corr);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4 * 4 * 6);
  const auto sqw = slurp(a / "sqw_exact.csv");
  CHECK(sqw.rfind("Q,omega,S\n", 0) == 0);
}

TEST_CASE("config files are loaded and flags win") {
  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "cv.json";
  std::ofstream(cfg) << R"({"command": "cv", "n": 4, "cluster_size": 2, "beta_min": 0.5, "beta_max": 0.6,
                          "beta_points": 2, "orders": ["exact", "2"], "out": "ignored"})";
  const auto r = cli({"cv", "--config", cfg.string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "cv.csv");
  CHECK(csv.rfind("beta,Cv,label\n0.5,", 0) == 0);
  CHECK(csv.find("order-2") != std::string::npos);
  CHECK(!std::filesystem::exists("ignored"));
  CHECK(cli({"corr", "--config", cfg.string()}).code == kExitConfig);
}

TEST_CASE("shipped figure configs are valid") {
  for (const std::string name : {"fig4", "fig5", "fig6", "fig7"}) {
    const auto path = std::filesystem::path(GIBBS_SOURCE_DIR) / "figs" / (name + ".json");
    const auto j = nlohmann::json::parse(slurp(path));
    const auto c = load_config(path.string(), j["command"].get<std::string>());
    CHECK_NOTHROW(validate(c));
  }
}

TEST_CASE("numbers print with 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(0.0) == "0");
}
