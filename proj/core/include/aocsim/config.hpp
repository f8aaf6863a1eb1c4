// SPDX-License-Identifier: Apache-2.0
//
// aocsim: sub-THz antenna-on-chip design and simulation toolkit
// Copyright (C) 2026 The aocsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aocsim/effective_medium.hpp"
#include "aocsim/fdtd.hpp"
#include "aocsim/geometry.hpp"
#include "aocsim/validation.hpp"
#include "aocsim/voxel_grid.hpp"

namespace aocsim {

enum class MeshPreset { coarse, fine };

std::string to_string(MeshPreset mesh);
MeshPreset parse_mesh(const std::string& name);

struct AdlSweep {
  double theta = 0.0;  // radians
  em::KRhoConvention convention = em::KRhoConvention::paper_literal;
  double start_hz = 200e9, stop_hz = 400e9, step_hz = 5e9;
  double export_frequency_hz = 290e9;

  std::vector<double> frequencies() const;
};

struct AnalysisSettings {
  double threshold_db = -10.0;
  double reference_hz = 290e9;
  double s11_step_hz = 2.5e9;  // S11 resolution for bandwidth extraction
  double pattern_step_deg = 5.0;
  double pattern_frequency_hz = 290e9;
};

// Everything a command needs. Lengths are microns and frequencies GHz in
// the file; SI inside.
struct RunConfig {
  int stage = 4;
  std::vector<int> stages{1, 2, 3, 4};
  geom::AntennaParams params{};
  geom::ChipStack chip{};
  bool beol_effective = true;  // BEOL slab takes the homogenized permittivity
  em::AdlStack adl{};
  AdlSweep sweep{};
  MeshPreset mesh = MeshPreset::coarse;
  double cell_size_override = 0.0;  // 0: from the mesh preset
  double memory_budget_bytes = 3.0e9;
  fdtd::SimulationConfig sim = default_simulation();
  double dft_start_hz = 200e9, dft_stop_hz = 400e9, dft_step_hz = 10e9;
  AnalysisSettings analysis{};
  std::string output_dir = "out";
  bool deterministic = false;

  static fdtd::SimulationConfig default_simulation();

  double cell_size() const;
  std::vector<double> dft_frequencies() const;
  std::vector<double> s11_frequencies() const;
  // Chip stack with the BEOL filled in from the homogenizer when enabled.
  geom::ChipStack solver_stack() const;
  // Solver configuration with DFT frequencies, thread count and mesh applied.
  fdtd::SimulationConfig simulation() const;
  validation::ValidationOptions validation_options() const;

  // Throws ConfigError on the first inconsistency.
  void validate() const;
  // Every setting as (section.key, value) in file units, for manifests.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
// Round-trippable INI text of every setting.
std::string format_config(const RunConfig& config);

}  // namespace aocsim
