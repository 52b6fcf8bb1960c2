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

#ifndef GPSIM_EXPERIMENT_HPP
#define GPSIM_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpsim/channel.hpp"

namespace gpsim {

enum class Preset { kCustom, kFig1, kFig2, kFig3, kTable1 };

std::string preset_name(Preset preset);
Preset preset_from_name(const std::string& name);

struct RateGridSpec {
  int points = 64;
  double lo_factor = 0.1;  // of the naive max-min SINR
  double hi_factor = 4.0;
};

/// Everything needed to reproduce a run. Serialized as strict key=value
/// text; the metadata sidecar written next to results is itself a valid
/// config for re-running.
struct ExperimentSpec {
  Preset preset = Preset::kCustom;
  ScenarioConfig scenario;
  int n_channel_sets = 100;
  double eta = 0.3;
  int degree = 6;
  std::vector<double> a_grid;  // empty: preset default
  RateGridSpec rate_grid;
  int mc_samples = 2000;
  std::string output_path = ".";
  std::uint64_t seed = 1;
  int jobs = 1;  // CLI-level worker count, not persisted

  void validate() const;
};

/// Strict parser: unknown keys are errors, omitted keys take the defaults
/// above. Lines are `key = value`, '#' starts a comment.
ExperimentSpec parse_config(const std::string& path);
ExperimentSpec parse_config_stream(std::istream& is, const std::string& name);
void save_config(const ExperimentSpec& spec, std::ostream& os);

struct RunResult {
  std::vector<std::string> files;  // written, in order
  int redraws = 0;                 // degenerate channel sets redrawn
};

/// Executes the preset and writes CSV results plus a metadata sidecar under
/// spec.output_path. Deterministic for fixed (spec, seed), independent of
/// the worker count.
RunResult run(const ExperimentSpec& spec);

}  // namespace gpsim

#endif  // GPSIM_EXPERIMENT_HPP
