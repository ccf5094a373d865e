#include <cstdio>
#include <future>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crossinf/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Blowup-crossing simulation scenarios"};
  app.require_subcommand(0, 1);

  std::string config_path, output_dir, sweep_key;
  std::vector<std::string> overrides, sweep_values;

  app.add_option("--config", config_path, "key=value scenario config file");
  app.add_option("--set", overrides, "parameter override key=value")
      ->take_all();
  app.add_option("--out", output_dir, "output directory");
  app.add_option("--sweep", sweep_key, "parameter to sweep");
  app.add_option("--values", sweep_values,
                 "sweep values (one run per value, in parallel)")
      ->delimiter(',');

  std::string sub_selected;
  for (const std::string& name : crossinf::scenario_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->callback([&sub_selected, name] { sub_selected = name; });
    sub->allow_extras(); // extras surface as unknown-parameter errors later
  }

  CLI11_PARSE(app, argc, argv);

  crossinf::ScenarioConfig config;
  try {
    if (!config_path.empty()) config = crossinf::parse_config_file(config_path);
    if (!sub_selected.empty()) config.scenario = sub_selected;
    for (CLI::App* sub : app.get_subcommands()) {
      std::vector<std::string> extras = sub->remaining();
      for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string tok = extras[i];
        if (tok.rfind("--", 0) == 0) tok.erase(0, 2);
        if (tok.find('=') == std::string::npos) {
          if (i + 1 >= extras.size())
            throw std::runtime_error("missing value for parameter '" + tok + "'");
          tok += "=" + extras[++i];
        }
        crossinf::apply_override(config, tok);
      }
    }
    for (const std::string& assignment : overrides)
      crossinf::apply_override(config, assignment);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (config.scenario.empty())
      throw std::runtime_error("no scenario selected (subcommand or scenario=)");
    if (sweep_key.empty() != sweep_values.empty())
      throw std::runtime_error("--sweep requires --values and vice versa");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  if (sweep_key.empty()) return crossinf::run_scenario(config);

  std::vector<std::future<int>> futures;
  for (const std::string& value : sweep_values) {
    crossinf::ScenarioConfig sub = config;
    sub.parameters[sweep_key] = value;
    if (sub.output_dir.empty()) sub.output_dir = "out";
    sub.output_dir += "/" + config.scenario + "_" + sweep_key + "=" + value;
    futures.push_back(std::async(std::launch::async, crossinf::run_scenario,
                                 std::move(sub)));
  }
  int rc = 0;
  for (auto& f : futures) rc = std::max(rc, f.get());
  return rc;
}
