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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"
#include "aocsim/geometry.hpp"
#include "aocsim/voxel_grid.hpp"

using namespace aocsim;
using namespace aocsim::geom;
using constants::um;

namespace {

bool has_violation(const std::vector<Violation>& v, std::string_view param) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.parameter == param; });
}

// Point-in-rectangle evaluation over every rect, independent of PlanarLayout::is_metal.
bool brute_force_metal(const PlanarLayout& l, double x, double y) {
  bool ground = false, hole = false;
  for (const auto& r : l.rects) {
    const bool in = x >= r.x0 && x < r.x1 && y >= r.y0 && y < r.y1;
    if (!in) continue;
    if (r.tag == RectTag::ground) ground = true;
    if (r.tag == RectTag::slot1 || r.tag == RectTag::slot2 || r.tag == RectTag::tuning_element ||
        r.tag == RectTag::cpw_gap)
      hole = true;
  }
  return ground && !hole;
}

}  // namespace

TEST(StagePreset, RangeAndFlags) {
  EXPECT_THROW(StagePreset{0}, ConfigError);
  EXPECT_THROW(StagePreset{5}, ConfigError);
  EXPECT_FALSE(StagePreset{1}.has_director());
  EXPECT_TRUE(StagePreset{2}.has_director());
  EXPECT_FALSE(StagePreset{2}.reduced_ground());
  EXPECT_TRUE(StagePreset{3}.reduced_ground());
  EXPECT_FALSE(StagePreset{3}.has_tuning_element());
  EXPECT_TRUE(StagePreset{4}.has_tuning_element());
}

TEST(Footprint, StageSizes) {
  for (int s : {1, 2}) {
    const auto f = stage_footprint(StagePreset{s});
    EXPECT_NEAR(f.width, 600 * um, 1e-12);
    EXPECT_NEAR(f.length, 300 * um, 1e-12);
  }
  for (int s : {3, 4}) {
    const auto f = stage_footprint(StagePreset{s});
    EXPECT_NEAR(f.width, 420 * um, 1e-12);
    EXPECT_NEAR(f.length, 240 * um, 1e-12);
  }
}

TEST(StageGeometry, ElementsAccumulateByStage) {
  const AntennaParams p;
  std::size_t prev = 0;
  for (int s = 1; s <= 4; ++s) {
    const auto l = stage_geometry(StagePreset{s}, p);
    EXPECT_EQ(l.stage, s);
    EXPECT_EQ(l.with_tag(RectTag::ground).size(), 1u);
    EXPECT_EQ(l.with_tag(RectTag::slot1).size(), 2u);
    EXPECT_EQ(l.with_tag(RectTag::cpw_gap).size(), 2u);
    EXPECT_EQ(l.with_tag(RectTag::slot2).empty(), s == 1);
    EXPECT_EQ(l.with_tag(RectTag::tuning_element).size(), s == 4 ? 1u : 0u);
    EXPECT_GT(l.rects.size(), prev);
    prev = l.rects.size();
  }
  EXPECT_EQ(stage_geometry(StagePreset{4}, p).rects.size(), 9u);
}

TEST(StageGeometry, AllApertureRectsInsideFootprint) {
  for (int s = 1; s <= 4; ++s) {
    const auto l = stage_geometry(StagePreset{s}, AntennaParams{});
    for (const auto& r : l.rects) {
      EXPECT_GE(r.x0, -1e-12);
      EXPECT_GE(r.y0, -1e-12);
      EXPECT_LE(r.x1, l.footprint.width + 1e-12);
      EXPECT_LE(r.y1, l.footprint.length + 1e-12);
      EXPECT_GT(r.area(), 0.0);
    }
  }
}

TEST(StageGeometry, SymmetricAboutFeedAxis) {
  const auto l = stage_geometry(StagePreset{4}, AntennaParams{});
  const double xc = 0.5 * l.footprint.width;
  for (double y = 1 * um; y < l.footprint.length; y += 3.7 * um)
    for (double dx = 0.5 * um; dx < xc; dx += 4.3 * um)
      EXPECT_EQ(l.is_metal(xc - dx, y), l.is_metal(xc + dx - 1e-12, y)) << y << " " << dx;
}

TEST(CpwFeed, FiftyOhmDesign) {
  const auto f = design_cpw_feed(AntennaParams{}, 210 * um);
  EXPECT_NEAR(f.signal_width, 20 * um, 1e-12);
  EXPECT_NEAR(cpw_impedance(f.signal_width, f.gap, 11.9), 50.0, 1e-6);
  EXPECT_NEAR(f.gap / um, 11.966, 0.01);
  EXPECT_GT(cpw_impedance(20 * um, 30 * um, 11.9), cpw_impedance(20 * um, 10 * um, 11.9));
}

TEST(ValidateParams, DefaultsAreClean) {
  for (int s = 1; s <= 4; ++s) EXPECT_TRUE(validate_params(AntennaParams{}, StagePreset{s}).empty()) << s;
}

TEST(ValidateParams, NonPositiveParameterIsNamed) {
  AntennaParams p;
  p.set("G", 0.0);
  const auto v = validate_params(p, StagePreset{1});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].parameter, "G");
  EXPECT_EQ(v[0].message, "G must be positive");
  EXPECT_THROW(stage_geometry(StagePreset{1}, p), GeometryError);
}

TEST(ValidateParams, OversizedDirectorIsRejected) {
  AntennaParams p;
  p.slot2_width = 200 * um;
  EXPECT_TRUE(validate_params(p, StagePreset{1}).empty());
  EXPECT_TRUE(has_violation(validate_params(p, StagePreset{2}), "W_s2"));
  try {
    stage_geometry(StagePreset{4}, p);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("director"), std::string::npos);
  }
}

TEST(ValidateParams, TuningAndOpeningConstraints) {
  AntennaParams p;
  p.tuning_length = 80 * um;
  EXPECT_TRUE(has_violation(validate_params(p, StagePreset{4}), "L_3"));
  EXPECT_TRUE(validate_params(p, StagePreset{3}).empty());
  p = AntennaParams{};
  p.opening_width = 300 * um;
  EXPECT_TRUE(has_violation(validate_params(p, StagePreset{3}), "W_2"));
  p = AntennaParams{};
  p.slot1_length = 30 * um;
  EXPECT_TRUE(has_violation(validate_params(p, StagePreset{1}), "L_s1"));
}

TEST(AntennaParams, LabelAccess) {
  AntennaParams p;
  for (auto label : AntennaParams::labels()) {
    p.set(label, 1.25e-5);
    EXPECT_EQ(p.get(label), 1.25e-5);
  }
  EXPECT_THROW(p.get("nope"), ConfigError);
  EXPECT_THROW(p.set("nope", 1.0), ConfigError);
}

TEST(Layout, TextRoundTrip) {
  for (int s = 1; s <= 4; ++s) {
    const auto l = stage_geometry(StagePreset{s}, AntennaParams{});
    const auto text = format_layout(l);
    const auto back = parse_layout(text);
    EXPECT_EQ(back.stage, l.stage);
    ASSERT_EQ(back.rects.size(), l.rects.size());
    for (std::size_t i = 0; i < l.rects.size(); ++i) {
      EXPECT_EQ(back.rects[i].tag, l.rects[i].tag);
      EXPECT_NEAR(back.rects[i].x0, l.rects[i].x0, 1e-10);
      EXPECT_NEAR(back.rects[i].y1, l.rects[i].y1, 1e-10);
    }
    EXPECT_EQ(format_layout(back), text);
  }
  EXPECT_THROW(parse_layout("footprint 1 2\n"), ConfigError);
  EXPECT_THROW(parse_layout("stage 1\nrect hole 0 0 1 1\n"), ConfigError);
}

TEST(Rasterize, RectangleCellCount) {
  PlanarLayout l;
  l.footprint = {100 * um, 50 * um};
  l.rects = {{RectTag::ground, 0.0, 0.0, 100 * um, 50 * um}};
  auto stack = ChipStack::vacuum();
  stack.air_margin = 20 * um;
  const auto g = rasterize(l, stack, 5 * um, {.absorber_cells = 2});
  EXPECT_EQ(g.metal_cell_count(), 200u);
  EXPECT_EQ(g.chip_x[1] - g.chip_x[0], 20);
  EXPECT_EQ(g.chip_y[1] - g.chip_y[0], 10);
  for (int j = 0; j < g.dims[1]; ++j)
    for (int i = 0; i < g.dims[0]; ++i)
      EXPECT_EQ(g.metal_at(i, j), i >= g.chip_x[0] && i < g.chip_x[1] && j >= g.chip_y[0] && j < g.chip_y[1]);
}

TEST(Rasterize, StageFourMaskMatchesBruteForce) {
  const auto l = stage_geometry(StagePreset{4}, AntennaParams{});
  const auto g = rasterize(l, ChipStack{}, 5 * um);
  EXPECT_EQ(g.dims[0], 242);
  EXPECT_EQ(g.dims[1], 206);
  std::size_t mismatches = 0, metal = 0;
  for (int j = 0; j < g.dims[1]; ++j)
    for (int i = 0; i < g.dims[0]; ++i) {
      const double x = g.origin[0] + (i + 0.5) * g.cell_size, y = g.origin[1] + (j + 0.5) * g.cell_size;
      const bool want = brute_force_metal(l, x, y);
      mismatches += want != g.metal_at(i, j);
      metal += want;
    }
  EXPECT_EQ(mismatches, 0u);
  EXPECT_EQ(g.metal_cell_count(), metal);
  EXPECT_EQ(g.feed.size(), 2u);
  EXPECT_NE(g.feed[0].orientation, g.feed[1].orientation);
}

TEST(Rasterize, StackLayersAndWarnings) {
  const auto g = rasterize(stage_geometry(StagePreset{1}, AntennaParams{}), ChipStack{}, 5 * um);
  EXPECT_EQ(g.dims[0], 278);
  EXPECT_EQ(g.dims[1], 218);
  EXPECT_EQ(g.dims[2], 181);
  const int ic = (g.chip_x[0] + g.chip_x[1]) / 2, jc = (g.chip_y[0] + g.chip_y[1]) / 2;
  EXPECT_EQ(g.material_at(ic, jc, g.metal_plane_k - 1).name, "beol");
  EXPECT_EQ(g.material_at(ic, jc, g.metal_plane_k - 3).name, "substrate");
  EXPECT_EQ(g.material_at(ic, jc, g.metal_plane_k + 1).name, "air");
  EXPECT_EQ(g.material_at(0, 0, g.metal_plane_k - 3).name, "air");
  const bool warned = std::any_of(g.warnings.begin(), g.warnings.end(),
                                  [](const std::string& w) { return w.find("passivation") != std::string::npos; });
  EXPECT_TRUE(warned);
}

TEST(Rasterize, RefinementPreservesMetalArea) {
  const auto l = stage_geometry(StagePreset{4}, AntennaParams{});
  auto stack = ChipStack{};
  stack.air_margin = 10 * um;
  stack.substrate_thickness = 20 * um;
  double prev_err = 1e9;
  double exact = 0.0;
  {
    // Area on a 0.25 um reference raster.
    const double h = 0.25 * um;
    for (double y = 0.5 * h; y < l.footprint.length; y += h)
      for (double x = 0.5 * h; x < l.footprint.width; x += h) exact += l.is_metal(x, y) ? h * h : 0.0;
  }
  for (double cell : {10 * um, 5 * um, 2.5 * um}) {
    const auto g = rasterize(l, stack, cell, {.absorber_cells = 1});
    const double area = double(g.metal_cell_count()) * cell * cell;
    const double err = std::abs(area - exact) / exact;
    EXPECT_LE(err, prev_err + 1e-3) << cell;
    prev_err = err;
  }
  EXPECT_LT(prev_err, 0.03);
}

TEST(Rasterize, SizingAndCellErrors) {
  const auto l = stage_geometry(StagePreset{1}, AntennaParams{});
  EXPECT_THROW(rasterize(l, ChipStack{}, 0.0), ConfigError);
  try {
    rasterize(l, ChipStack{}, 0.5 * um, {.absorber_cells = 10, .memory_budget_bytes = 1e8});
    FAIL();
  } catch (const SizingError& e) {
    EXPECT_NE(std::string(e.what()).find("cell size"), std::string::npos);
  }
}

TEST(VoxelFile, BinaryRoundTrip) {
  const auto g = rasterize(stage_geometry(StagePreset{3}, AntennaParams{}), ChipStack{}, 10 * um);
  std::stringstream ss;
  write_voxel_grid(ss, g);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 8), "AOCVOXEL");
  EXPECT_GE(bytes.size(), 64 + g.cell_count());
  const auto back = read_voxel_grid(ss);
  EXPECT_EQ(back.dims, g.dims);
  EXPECT_EQ(back.cells, g.cells);
  EXPECT_EQ(back.metal, g.metal);
  EXPECT_EQ(back.materials, g.materials);
  EXPECT_EQ(back.origin, g.origin);
  EXPECT_EQ(back.metal_plane_k, g.metal_plane_k);
  ASSERT_EQ(back.feed.size(), g.feed.size());
  EXPECT_EQ(back.feed[0].edges, g.feed[0].edges);
  std::stringstream again;
  write_voxel_grid(again, back);
  EXPECT_EQ(again.str(), bytes);

  std::istringstream bad("NOTVOXEL0000");
  EXPECT_THROW(read_voxel_grid(bad), ConfigError);
  std::istringstream cut(bytes.substr(0, 100));
  EXPECT_THROW(read_voxel_grid(cut), ConfigError);
}
