#ifndef CROSSINF_SCENARIO_HPP
#define CROSSINF_SCENARIO_HPP

#include <map>
#include <string>
#include <vector>

namespace crossinf {

/// Flat scenario description: a scenario name, key=value parameters, and an
/// output directory. All scenarios are deterministic (no seeds).
struct ScenarioConfig {
  std::string scenario;
  std::map<std::string, std::string> parameters;
  std::string output_dir; // empty: $CROSSINF_OUT, falling back to ./out
};

/// Names accepted in ScenarioConfig::scenario.
const std::vector<std::string>& scenario_names();

/// Parse a flat key=value config file ('#' comments, blank lines ignored).
/// The keys "scenario" and "output_dir" land in the dedicated fields.
ScenarioConfig parse_config_file(const std::string& path);

/// Apply a single "key=value" override.
void apply_override(ScenarioConfig& config, const std::string& assignment);

/// Run a scenario, writing CSV artifacts and a summary JSON into the output
/// directory. Returns 0 when all enabled checks pass, 2 on a configuration
/// error, 3 on a numerical failure or failed check (with diagnostics in the
/// summary/diagnostic JSON).
int run_scenario(const ScenarioConfig& config);

} // namespace crossinf

#endif
