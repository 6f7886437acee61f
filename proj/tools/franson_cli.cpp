// Copyright 2026 The franson-swap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "franson/config.hpp"
#include "franson/run.hpp"

namespace {

struct ScenarioFlags {
  std::map<std::string, std::string> values;  // config key -> raw text

  void bind(CLI::App* cmd, const std::string& flag, const std::string& key,
            const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw franson::Error(franson::ErrorCode::kConfig, "cannot open config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon Franson interferometry and entanglement-swapping simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  ScenarioFlags global;
  bool seedless = false;
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  global.bind(&app, "--out-dir", "out_dir", "output directory");
  global.bind(&app, "--format", "formats", "comma list of csv,json,svg");
  global.bind(&app, "--grid-points", "grid_points", "frequency grid size (power of two)");
  app.add_flag("--seedless", seedless,
               "reserved; the simulator uses no random numbers and rejects this flag");

  ScenarioFlags flags;
  std::map<std::string, franson::Scenario> scenarios{
      {"franson", franson::Scenario::kFranson},
      {"swap", franson::Scenario::kSwap},
      {"hom", franson::Scenario::kHom},
      {"mismatch", franson::Scenario::kMismatch}};
  std::map<std::string, CLI::App*> commands;
  const std::map<std::string, std::string> descriptions{
      {"franson", "one pair, two unbalanced Mach-Zehnders"},
      {"swap", "swapped fringes for both post-selection classes"},
      {"hom", "cross-detector coincidence dip versus click separation"},
      {"mismatch", "swapped-fringe visibility versus click-separation detuning"}};
  for (const auto& [name, scenario] : scenarios) {
    auto* cmd = app.add_subcommand(name, descriptions.at(name));
    flags.bind(cmd, "--omega", "omega", "centre angular frequency (pump is twice this)");
    flags.bind(cmd, "--bandwidth", "bandwidth", "spectral width; tau = 1/bandwidth");
    flags.bind(cmd, "--t-short", "t_short", "short-arm delay");
    flags.bind(cmd, "--t-long", "t_long", "long-arm delay");
    flags.bind(cmd, "--alpha", "alpha", "phase of interferometer A (radians)");
    flags.bind(cmd, "--beta", "beta", "phase of interferometer B (radians)");
    flags.bind(cmd, "--delta-small-t", "delta_small_t", "click separation, or 'equal'");
    flags.bind(cmd, "--scan", "sweep",
               "swept parameter: alpha, beta, phase_diff, dt, imbalance, detuning");
    flags.bind(cmd, "--from", "sweep_from", "first swept value (suffix tau or pi allowed)");
    flags.bind(cmd, "--to", "sweep_to", "last swept value (suffix tau or pi allowed)");
    flags.bind(cmd, "--steps", "sweep_steps", "number of swept values");
    flags.bind(cmd, "--span-factor", "span_factor", "grid span in units of the bandwidth");
    flags.bind(cmd, "--postselection", "postselection", "mismatch class: same or different");
    commands[name] = cmd;
  }
  std::size_t oracle_points = 512;
  auto* oracle_cmd = app.add_subcommand(
      "oracle-check", "compare the fast path with the brute-force oracle");
  oracle_cmd->add_option("--points", oracle_points, "grid points (<= 512)")
      ->check(CLI::Range(16, 512));

  CLI11_PARSE(app, argc, argv);

  if (seedless) {
    std::cerr << "error: --seedless is reserved: the simulator is deterministic and uses no "
                 "random numbers\n";
    return franson::kExitUsage;
  }

  if (oracle_cmd->parsed()) {
    const auto cases = franson::oracle_comparison(oracle_points);
    bool ok = true;
    for (const auto& c : cases) {
      const bool pass = c.max_abs_diff <= 1e-8;
      ok = ok && pass;
      std::cout << (pass ? "PASS " : "FAIL ") << c.name << " max |fast - oracle| = "
                << c.max_abs_diff << "\n";
    }
    return ok ? franson::kExitOk : franson::kExitInvariant;
  }

  for (const auto& [name, cmd] : commands) {
    if (!cmd->parsed()) continue;
    try {
      auto config = franson::default_config(scenarios.at(name));
      if (!config_path.empty()) {
        config = franson::apply_key_values(
            config, franson::parse_key_values(read_file(config_path), config_path));
        config.scenario = scenarios.at(name);
      }
      auto overrides = global.values;
      overrides.insert(flags.values.begin(), flags.values.end());
      config = franson::apply_key_values(config, overrides);
      return franson::execute(config, std::cout);
    } catch (const franson::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return franson::kExitUsage;
    }
  }
  return franson::kExitUsage;
}
