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
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aocsim/config.hpp"
#include "aocsim/error.hpp"
#include "aocsim/pipeline.hpp"
#include "aocsim/sparams.hpp"

using namespace aocsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aocsim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  const auto s = read_file(p);
  return std::size_t(std::count(s.begin(), s.end(), '\n'));
}

// Stage 4 on 10 um cells with a short record: fast, not converged.
RunConfig reduced_config() {
  RunConfig c;
  c.cell_size_override = 10e-6;
  c.sim.time_steps = 1200;
  c.deterministic = true;
  c.dft_step_hz = 20e9;
  c.analysis.s11_step_hz = 10e9;
  c.analysis.pattern_step_deg = 10.0;
  return c;
}

}  // namespace

TEST(Pipeline, HomogenizeWritesCurves) {
  const auto dir = scratch("homogenize");
  const auto h = pipeline::homogenize(RunConfig{}, dir);
  EXPECT_EQ(h.frequencies.size(), 41u);
  EXPECT_NEAR(h.exported.relative_permittivity, 35.60308258445591, 1e-9);
  EXPECT_EQ(line_count(dir / "homogenize.csv"), 42u);
  EXPECT_EQ(line_count(dir / "homogenize_tm.csv"), 42u);
  EXPECT_NE(read_file(dir / "homogenize_manifest.json").find("exported_permittivity"), std::string::npos);
}

TEST(Pipeline, BuildGeometryWritesLayoutAndVoxels) {
  const auto dir = scratch("geometry");
  auto c = RunConfig{};
  c.cell_size_override = 10e-6;
  const auto g = pipeline::build_geometry(c, 4, dir, true);
  ASSERT_TRUE(g.grid.has_value());
  const auto back = geom::parse_layout(read_file(dir / "layout.txt"));
  EXPECT_EQ(back.rects.size(), g.layout.rects.size());
  std::ifstream in(dir / "voxels.bin", std::ios::binary);
  const auto grid = geom::read_voxel_grid(in);
  EXPECT_EQ(grid.dims, g.grid->dims);
  EXPECT_EQ(grid.metal, g.grid->metal);
  c.params.slot2_width = 300e-6;
  EXPECT_THROW(pipeline::build_geometry(c, 4, dir, false), GeometryError);
}

TEST(Pipeline, FixtureSweepReproducesGoldenTable) {
  const auto dir = scratch("fixture");
  const auto out = pipeline::sweep_stages(RunConfig{}, dir, true);
  EXPECT_EQ(out.stages.size(), 4u);
  EXPECT_EQ(read_file(dir / "stage_report.txt"), read_file(fs::path(AOCSIM_GOLDEN_DIR) / "table1.txt"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST(Pipeline, FixtureSweepSingleStage) {
  const auto dir = scratch("fixture_single");
  auto c = RunConfig{};
  c.stages = {4};
  const auto out = pipeline::sweep_stages(c, dir, true);
  ASSERT_EQ(out.stages.size(), 1u);
  EXPECT_EQ(read_file(dir / "stage_report.txt").rfind("Design          | Stage 4\n", 0), 0u);
}

TEST(Pipeline, FailedSweepKeepsPartialManifest) {
  const auto dir = scratch("sweep_fail");
  auto c = reduced_config();
  c.stages = {1};
  c.memory_budget_bytes = 1e6;
  EXPECT_THROW(pipeline::sweep_stages(c, dir, false), SizingError);
  const auto manifest = read_file(dir / "manifest.json");
  EXPECT_NE(manifest.find("\"failed_stage\": 1"), std::string::npos);
}

TEST(Pipeline, ReducedRunAndAnalyze) {
  const auto dir = scratch("run");
  const auto o = pipeline::run_stage(reduced_config(), 4, dir);
  EXPECT_EQ(o.stats.steps, 1200);
  EXPECT_FALSE(o.stats.warnings.empty());
  for (const char* f : {pipeline::kTouchstone, pipeline::kFarField, pipeline::kEfficiency, pipeline::kManifest,
                        "smith.csv", "pattern_cuts.csv", "metrics.kv", "metrics.txt", "layout.txt"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;

  std::ifstream ts(dir / pipeline::kTouchstone);
  const auto t = sparams::read_touchstone(ts);
  EXPECT_EQ(t.frequencies.size(), 21u);
  for (const auto& s : t.s11) EXPECT_TRUE(std::isfinite(std::abs(s)));
  EXPECT_EQ(read_file(dir / pipeline::kTouchstone).substr(0, 16), "# GHz S RI R 50\n");
  // 11 DFT frequencies x 19 theta x 36 phi rows plus the header.
  EXPECT_EQ(line_count(dir / pipeline::kFarField), 1u + 11u * 19u * 36u);
  EXPECT_EQ(read_file(dir / pipeline::kFarField).substr(0, 13), "frequency_hz,");

  const auto m = pipeline::analyze(reduced_config(), dir);
  EXPECT_EQ(m.far_field.frequencies.size(), 11u);
  ASSERT_TRUE(m.efficiency_peak.has_value());
  for (double e : m.far_field.efficiency) EXPECT_TRUE(std::isfinite(e));
  const auto manifest = read_file(dir / pipeline::kManifest);
  for (const char* key : {"\"grid_dims\"", "\"dt_s\"", "\"steps\"", "\"energy_decay_level\"", "\"wall_seconds\"",
                          "\"config\"", "\"antenna.L_s1_um\""})
    EXPECT_NE(manifest.find(key), std::string::npos) << key;
}

TEST(Pipeline, AnalyzeMissingFilesIsConfigError) {
  const auto dir = scratch("empty");
  EXPECT_THROW(pipeline::analyze(RunConfig{}, dir), ConfigError);
}
