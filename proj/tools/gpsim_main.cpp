/*
 * Copyright 2026 The gpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "gpsim/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "gpsim: goodput and outage simulator for multiuser MISO downlink "
      "beamforming under channel uncertainty"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_override;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  int jobs = 1;

  CLI::App* run_cmd = app.add_subcommand("run", "execute an experiment");
  run_cmd->add_option("--config", config_path, "config file path")->required();
  run_cmd->add_option("--preset", preset_override,
                      "fig1|fig2|fig3|table1|custom (overrides config)");
  run_cmd->add_option("--seed", seed_override, "RNG seed (overrides config)")
      ->each([&](const std::string&) { has_seed = true; });
  run_cmd->add_option("--out", out_override, "output directory");
  run_cmd->add_option("--jobs", jobs, "worker threads for scenario batches");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "parse and validate a config");
  validate_cmd->add_option("--config", config_path, "config file path")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    gpsim::ExperimentSpec spec = gpsim::parse_config(config_path);
    if (!preset_override.empty()) {
      spec.preset = gpsim::preset_from_name(preset_override);
    }
    if (has_seed) spec.seed = seed_override;
    if (!out_override.empty()) spec.output_path = out_override;
    spec.jobs = jobs;
    spec.validate();

    if (app.got_subcommand(validate_cmd)) {
      std::cout << "ok: " << config_path << " (preset "
                << gpsim::preset_name(spec.preset) << ")\n";
      return 0;
    }

    const gpsim::RunResult result = gpsim::run(spec);
    for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
    if (result.redraws > 0) {
      std::cout << "redrew " << result.redraws
                << " degenerate channel set(s)\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
