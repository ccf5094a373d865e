#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "crossinf/scenario.hpp"

using namespace crossinf;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("crossinf_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json summary_of(const fs::path& dir) {
  return nlohmann::json::parse(slurp(dir / "summary.json"));
}

} // namespace

TEST_CASE("config file parsing and overrides") {
  fs::path cfg_path = fs::temp_directory_path() / "crossinf_cfg.txt";
  {
    std::ofstream out(cfg_path);
    out << "# comment line\n"
        << "scenario=parabola-fixture\n"
        << "t=1.4   # trailing comment\n"
        << "\n"
        << "output_dir=somewhere\n";
  }
  ScenarioConfig config = parse_config_file(cfg_path.string());
  CHECK(config.scenario == "parabola-fixture");
  CHECK(config.output_dir == "somewhere");
  CHECK(config.parameters.at("t") == "1.4");
  apply_override(config, "t=2.0");
  CHECK(config.parameters.at("t") == "2.0");
  CHECK_THROWS(apply_override(config, "no-equals-sign"));
}

TEST_CASE("unknown scenario and unknown parameters exit 2") {
  ScenarioConfig config;
  config.scenario = "no-such-scenario";
  config.output_dir = fresh_dir("unknown").string();
  CHECK(run_scenario(config) == 2);

  config.scenario = "parabola-fixture";
  config.parameters["bogus_key"] = "1";
  CHECK(run_scenario(config) == 2);

  config.parameters.clear();
  config.parameters["t"] = "not-a-number";
  CHECK(run_scenario(config) == 2);
}

TEST_CASE("parabola-fixture scenario: artifacts and summary") {
  fs::path dir = fresh_dir("parabola");
  ScenarioConfig config;
  config.scenario = "parabola-fixture";
  config.parameters["t"] = "1.4";
  config.output_dir = dir.string();
  CHECK(run_scenario(config) == 0);
  CHECK(fs::exists(dir / "fields.csv"));
  auto summary = summary_of(dir);
  CHECK(summary["scenario"] == "parabola-fixture");
  CHECK(summary["pass"] == true);
  CHECK(summary["checks"]["crossings_match"] == true);
}

TEST_CASE("compactify scenario: riemann point example") {
  fs::path dir = fresh_dir("riemann");
  ScenarioConfig config;
  config.scenario = "compactify";
  config.parameters["map"] = "riemann";
  config.parameters["x"] = "0";
  config.parameters["y"] = "0";
  config.output_dir = dir.string();
  CHECK(run_scenario(config) == 0);
  auto summary = summary_of(dir);
  CHECK(summary["results"]["Z"] == doctest::Approx(-1.0));
}

TEST_CASE("ode-cross scenario: summary t_star = 1") {
  fs::path dir = fresh_dir("odecross");
  ScenarioConfig config;
  config.scenario = "ode-cross";
  config.parameters = {{"rhs", "power"}, {"p", "2"}, {"x0", "1"}};
  config.output_dir = dir.string();
  CHECK(run_scenario(config) == 0);
  auto summary = summary_of(dir);
  CHECK(std::abs(summary["t_star"].get<double>() - 1.0) <= 1e-6);
  CHECK(fs::exists(dir / "trajectory.csv"));
}

TEST_CASE("byte-identical reruns of a scenario") {
  fs::path a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
  for (const fs::path& dir : {a, b}) {
    ScenarioConfig config;
    config.scenario = "compactify";
    config.parameters["map"] = "asymptotic";
    config.output_dir = dir.string();
    CHECK(run_scenario(config) == 0);
  }
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
  CHECK(slurp(a / "track.csv") == slurp(b / "track.csv"));
}

TEST_CASE("numerical failure exits 3 with a diagnostic") {
  fs::path dir = fresh_dir("failure");
  ScenarioConfig config;
  // quadratic blowup with a switch level the fit cannot reach in max_steps
  config.scenario = "transition-time";
  config.parameters["R"] = "1e300"; // forces an unreachable arrival
  config.output_dir = dir.string();
  int rc = run_scenario(config);
  CHECK(rc == 3);
  CHECK(fs::exists(dir / "diagnostic.json"));
}
