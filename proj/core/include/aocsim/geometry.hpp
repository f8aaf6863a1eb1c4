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

// Parametric dual-slot antenna layouts on the top-metal plane.
//
// Coordinates are in meters with the origin at the lower-left corner of the
// footprint. x runs along the slots, y runs from the feed edge (y = 0)
// through slot 1 towards the director.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aocsim::geom {

// The ten layout lengths. Comments give the label used on the layout
// drawing; the same labels are used in config files and reports.
struct AntennaParams {
  double slot1_length = 160e-6;    // L_s1
  double slot1_width = 30e-6;      // W_s1
  double slot2_length = 188e-6;    // L_s2, director slot
  double slot2_width = 53e-6;      // W_s2
  double feed_margin = 70e-6;      // G, ground between the feed edge and slot 1
  double slot_spacing = 75e-6;     // S_1, edge-to-edge gap between the slots
  double opening_width = 50e-6;    // W_2, director opening across x
  double opening_length = 55e-6;   // L_2, director opening along y
  double tuning_length = 50e-6;    // L_3, tuning aperture along y
  double tuning_width = 90e-6;     // W_3, tuning aperture along x

  static constexpr std::size_t count = 10;
  static const std::array<std::string_view, count>& labels();
  double get(std::string_view label) const;
  void set(std::string_view label, double value);
};

class StagePreset {
 public:
  explicit StagePreset(int stage);
  int value() const { return stage_; }
  bool has_director() const { return stage_ >= 2; }
  bool reduced_ground() const { return stage_ >= 3; }
  bool has_tuning_element() const { return stage_ >= 4; }

 private:
  int stage_;
};

struct Footprint {
  double width;   // x extent
  double length;  // y extent
};

// 0.6 x 0.3 mm for stages 1-2, 0.42 x 0.24 mm for stages 3-4.
Footprint stage_footprint(const StagePreset& stage);

enum class RectTag { ground, slot1, slot2, tuning_element, cpw_signal, cpw_gap };

std::string_view to_string(RectTag tag);
std::optional<RectTag> parse_tag(std::string_view name);
bool is_aperture(RectTag tag);

struct Rect {
  RectTag tag;
  double x0, y0, x1, y1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  bool operator==(const Rect&) const = default;
};

struct CpwFeed {
  double signal_width;
  double gap;
  double center_x;
  double length;  // from the feed edge to slot 1
};

// Conformal-mapping impedance of a CPW on a semi-infinite substrate.
double cpw_impedance(double signal_width, double gap, double substrate_permittivity);

// Signal width from the ground margin, gap solved for the target impedance.
CpwFeed design_cpw_feed(const AntennaParams& params, double center_x, double substrate_permittivity = 11.9,
                        double target_ohm = 50.0);

struct PlanarLayout {
  int stage = 1;
  Footprint footprint{};
  CpwFeed feed{};
  std::vector<Rect> rects;

  // Metal iff inside the ground plane and outside every aperture.
  bool is_metal(double x, double y) const;
  std::vector<Rect> with_tag(RectTag tag) const;
  double min_feature() const;
};

struct Violation {
  std::string parameter;
  std::string message;
};

/// Empty iff stage_geometry(stage, params) succeeds.
std::vector<Violation> validate_params(const AntennaParams& params, const StagePreset& stage,
                                       double substrate_permittivity = 11.9);

/// Throws GeometryError listing every violated extent.
PlanarLayout stage_geometry(const StagePreset& stage, const AntennaParams& params,
                            double substrate_permittivity = 11.9);

// Plain-text layout description, lengths in micrometres.
std::string format_layout(const PlanarLayout& layout);
PlanarLayout parse_layout(std::string_view text);

}  // namespace aocsim::geom
