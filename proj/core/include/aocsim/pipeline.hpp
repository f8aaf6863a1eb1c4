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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aocsim/analysis.hpp"
#include "aocsim/config.hpp"
#include "aocsim/effective_medium.hpp"
#include "aocsim/fdtd.hpp"
#include "aocsim/ntff.hpp"
#include "aocsim/validation.hpp"

namespace aocsim::pipeline {

namespace fs = std::filesystem;

// Progress sink for long-running commands; may be empty.
using Log = std::function<void(const std::string&)>;

struct HomogenizeOutput {
  std::vector<double> frequencies;
  em::HomogenizationResult result;
  em::ExportedMedium exported;
};

/// Sweep the dummy stack and write homogenize.csv (TE) and
/// homogenize_tm.csv with columns frequency_hz, re_k_eff, im_k_eff,
/// re_eps_eff, im_eps_eff.
HomogenizeOutput homogenize(const RunConfig& config, const fs::path& out_dir);

struct GeometryOutput {
  geom::PlanarLayout layout;
  std::optional<geom::VoxelGrid> grid;
};

/// Writes layout.txt and, when requested, voxels.bin.
GeometryOutput build_geometry(const RunConfig& config, int stage, const fs::path& out_dir, bool write_voxels);

// Result files of one antenna run.
inline constexpr const char* kTouchstone = "s11.s1p";
inline constexpr const char* kFarField = "farfield.csv";
inline constexpr const char* kEfficiency = "efficiency.csv";
inline constexpr const char* kManifest = "manifest.json";

struct StageOutcome {
  int stage = 0;
  std::array<int, 3> dims{};
  fdtd::RunStats stats;
  double beol_permittivity = 0.0;
};

/// Rasterize, time-step and post-process one stage into out_dir.
StageOutcome run_stage(const RunConfig& config, int stage, const fs::path& out_dir, const Log& log = {});

struct Metrics {
  analysis::SpectrumResult s11;        // Touchstone grid
  analysis::SpectrumResult far_field;  // DFT grid: S11, peak directivity, efficiency
  analysis::BandwidthReport bandwidth;
  std::optional<analysis::EfficiencyPeak> efficiency_peak;
  double directivity_at_carrier_dbi = 0.0;
  int smith_sign_changes = 0;
  std::vector<std::string> notes;  // deviations from the expected efficiency shape
};

/// Read s11.s1p, farfield.csv and efficiency.csv from `dir` and write
/// metrics.txt, metrics.kv, smith.csv and pattern_cuts.csv.
Metrics analyze(const RunConfig& config, const fs::path& dir);

// Reference comparison values used by the fixture mode.
std::map<int, analysis::StageMetrics> table_fixture();

struct SweepOutput {
  std::map<int, analysis::StageMetrics> stages;
  analysis::StageReport report;
};

/// Run (or, in fixture mode, inject) every configured stage and write
/// stage_report.txt plus a sweep manifest. A failing stage stops the sweep;
/// completed stage directories stay in place.
SweepOutput sweep_stages(const RunConfig& config, const fs::path& out_dir, bool fixture, const Log& log = {});

/// Oracle suite; writes validation.txt.
validation::ValidationReport validate(const RunConfig& config, const fs::path& out_dir, const Log& log = {});

// Plain-text writers shared by the commands.
void write_far_field_csv(std::ostream& out, const std::vector<ntff::FarFieldSolution>& solutions);
void write_efficiency_csv(std::ostream& out, const std::vector<ntff::FarFieldSolution>& solutions);

}  // namespace aocsim::pipeline
