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
#include "aocsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"

namespace aocsim::geom {

namespace {

using constants::um;

constexpr std::array<std::string_view, AntennaParams::count> kLabels = {
    "L_s1", "W_s1", "L_s2", "W_s2", "G", "S_1", "W_2", "L_2", "L_3", "W_3"};

double* field_ptr(AntennaParams& p, std::string_view label) {
  if (label == "L_s1") return &p.slot1_length;
  if (label == "W_s1") return &p.slot1_width;
  if (label == "L_s2") return &p.slot2_length;
  if (label == "W_s2") return &p.slot2_width;
  if (label == "G") return &p.feed_margin;
  if (label == "S_1") return &p.slot_spacing;
  if (label == "W_2") return &p.opening_width;
  if (label == "L_2") return &p.opening_length;
  if (label == "L_3") return &p.tuning_length;
  if (label == "W_3") return &p.tuning_width;
  return nullptr;
}

std::string um_str(double meters) {
  std::ostringstream os;
  os.precision(6);
  os << meters / um << " um";
  return os.str();
}

}  // namespace

const std::array<std::string_view, AntennaParams::count>& AntennaParams::labels() { return kLabels; }

double AntennaParams::get(std::string_view label) const {
  auto* p = field_ptr(const_cast<AntennaParams&>(*this), label);
  if (!p) throw ConfigError("unknown antenna parameter '" + std::string(label) + "'");
  return *p;
}

void AntennaParams::set(std::string_view label, double value) {
  auto* p = field_ptr(*this, label);
  if (!p) throw ConfigError("unknown antenna parameter '" + std::string(label) + "'");
  *p = value;
}

StagePreset::StagePreset(int stage) : stage_(stage) {
  if (stage < 1 || stage > 4) throw ConfigError("stage must be 1, 2, 3 or 4 (got " + std::to_string(stage) + ")");
}

Footprint stage_footprint(const StagePreset& stage) {
  if (stage.reduced_ground()) return {420 * um, 240 * um};
  return {600 * um, 300 * um};
}

std::string_view to_string(RectTag tag) {
  switch (tag) {
    case RectTag::ground: return "ground";
    case RectTag::slot1: return "slot1";
    case RectTag::slot2: return "slot2";
    case RectTag::tuning_element: return "tuning_element";
    case RectTag::cpw_signal: return "cpw_signal";
    case RectTag::cpw_gap: return "cpw_gap";
  }
  return "?";
}

std::optional<RectTag> parse_tag(std::string_view name) {
  for (RectTag t : {RectTag::ground, RectTag::slot1, RectTag::slot2, RectTag::tuning_element, RectTag::cpw_signal,
                    RectTag::cpw_gap})
    if (to_string(t) == name) return t;
  return std::nullopt;
}

bool is_aperture(RectTag tag) {
  return tag == RectTag::slot1 || tag == RectTag::slot2 || tag == RectTag::tuning_element || tag == RectTag::cpw_gap;
}

double cpw_impedance(double signal_width, double gap, double substrate_permittivity) {
  const double k = signal_width / (signal_width + 2.0 * gap);
  const double kp = std::sqrt(1.0 - k * k);
  const double eps_eff = 0.5 * (substrate_permittivity + 1.0);
  return 30.0 * constants::pi / std::sqrt(eps_eff) * std::comp_ellint_1(kp) / std::comp_ellint_1(k);
}

CpwFeed design_cpw_feed(const AntennaParams& params, double center_x, double substrate_permittivity,
                        double target_ohm) {
  CpwFeed feed;
  feed.signal_width = params.feed_margin * (2.0 / 7.0);
  feed.center_x = center_x;
  feed.length = params.feed_margin;
  double lo = 1e-3 * feed.signal_width;
  double hi = 20.0 * feed.signal_width;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cpw_impedance(feed.signal_width, mid, substrate_permittivity) < target_ohm)
      lo = mid;
    else
      hi = mid;
  }
  feed.gap = 0.5 * (lo + hi);
  return feed;
}

bool PlanarLayout::is_metal(double x, double y) const {
  bool in_ground = false;
  for (const auto& r : rects) {
    if (!r.contains(x, y)) continue;
    if (is_aperture(r.tag)) return false;
    if (r.tag == RectTag::ground) in_ground = true;
  }
  return in_ground;
}

std::vector<Rect> PlanarLayout::with_tag(RectTag tag) const {
  std::vector<Rect> out;
  std::copy_if(rects.begin(), rects.end(), std::back_inserter(out), [tag](const Rect& r) { return r.tag == tag; });
  return out;
}

double PlanarLayout::min_feature() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rects)
    if (r.tag != RectTag::ground) m = std::min({m, r.width(), r.height()});
  return m;
}

std::vector<Violation> validate_params(const AntennaParams& params, const StagePreset& stage,
                                       double substrate_permittivity) {
  std::vector<Violation> out;
  for (auto label : AntennaParams::labels()) {
    const double v = params.get(label);
    if (!std::isfinite(v) || v <= 0.0)
      out.push_back({std::string(label), std::string(label) + " must be positive"});
  }
  if (!out.empty()) return out;

  const Footprint fp = stage_footprint(stage);
  const auto feed = design_cpw_feed(params, 0.5 * fp.width, substrate_permittivity);
  const double feed_span = feed.signal_width + 2.0 * feed.gap;
  auto add = [&](std::string_view label, const std::string& msg) { out.push_back({std::string(label), msg}); };

  if (params.slot1_length <= feed_span)
    add("L_s1", "L_s1 = " + um_str(params.slot1_length) + " does not clear the CPW feed span " + um_str(feed_span));
  if (params.slot1_length > fp.width)
    add("L_s1", "L_s1 = " + um_str(params.slot1_length) + " exceeds the footprint width " + um_str(fp.width));
  const double slot1_top = params.feed_margin + params.slot1_width;
  if (slot1_top > fp.length)
    add("W_s1", "slot 1 reaches y = " + um_str(slot1_top) + ", beyond the footprint length " + um_str(fp.length));

  if (stage.has_director()) {
    const double y2b = slot1_top + params.slot_spacing;
    const double y2t = y2b + params.slot2_width;
    if (params.slot2_length > fp.width)
      add("L_s2", "L_s2 = " + um_str(params.slot2_length) + " exceeds the footprint width " + um_str(fp.width));
    if (y2t > fp.length)
      add("W_s2", "director reaches y = " + um_str(y2t) + ", beyond the footprint length " + um_str(fp.length));

    if (stage.reduced_ground()) {
      if (params.opening_width > params.slot2_length)
        add("W_2", "W_2 = " + um_str(params.opening_width) + " is wider than the director L_s2");
      const double open_y0 = fp.length - params.opening_length;
      if (open_y0 > y2t || open_y0 < y2b)
        add("L_2", "director opening starts at y = " + um_str(open_y0) + ", outside the director [" + um_str(y2b) +
                       ", " + um_str(y2t) + "]");
    }
    if (stage.has_tuning_element()) {
      if (params.tuning_width > params.slot2_length)
        add("W_3", "W_3 = " + um_str(params.tuning_width) + " is wider than the director L_s2");
      if (params.tuning_length >= params.slot_spacing)
        add("L_3", "L_3 = " + um_str(params.tuning_length) + " closes the slot spacing S_1 = " +
                       um_str(params.slot_spacing));
    }
  }
  return out;
}

PlanarLayout stage_geometry(const StagePreset& stage, const AntennaParams& p, double substrate_permittivity) {
  const auto violations = validate_params(p, stage, substrate_permittivity);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "stage " << stage.value() << " geometry cannot be built:";
    for (const auto& v : violations) os << "\n  " << v.message;
    throw GeometryError(os.str());
  }

  PlanarLayout layout;
  layout.stage = stage.value();
  layout.footprint = stage_footprint(stage);
  const double W = layout.footprint.width;
  const double L = layout.footprint.length;
  const double xc = 0.5 * W;
  layout.feed = design_cpw_feed(p, xc, substrate_permittivity);
  const double s2 = 0.5 * layout.feed.signal_width;
  const double g = layout.feed.gap;
  const double G = p.feed_margin;

  auto& r = layout.rects;
  r.push_back({RectTag::ground, 0.0, 0.0, W, L});
  r.push_back({RectTag::cpw_signal, xc - s2, 0.0, xc + s2, G + p.slot1_width});
  r.push_back({RectTag::cpw_gap, xc - s2 - g, 0.0, xc - s2, G});
  r.push_back({RectTag::cpw_gap, xc + s2, 0.0, xc + s2 + g, G});
  // The signal strip bridges slot 1 and lands on the far ground edge.
  r.push_back({RectTag::slot1, xc - 0.5 * p.slot1_length, G, xc - s2, G + p.slot1_width});
  r.push_back({RectTag::slot1, xc + s2, G, xc + 0.5 * p.slot1_length, G + p.slot1_width});

  const double y2b = G + p.slot1_width + p.slot_spacing;
  if (stage.has_director())
    r.push_back({RectTag::slot2, xc - 0.5 * p.slot2_length, y2b, xc + 0.5 * p.slot2_length, y2b + p.slot2_width});
  if (stage.reduced_ground())
    r.push_back({RectTag::slot2, xc - 0.5 * p.opening_width, L - p.opening_length, xc + 0.5 * p.opening_width, L});
  if (stage.has_tuning_element())
    r.push_back({RectTag::tuning_element, xc - 0.5 * p.tuning_width, y2b - p.tuning_length, xc + 0.5 * p.tuning_width,
                 y2b});
  return layout;
}

}  // namespace aocsim::geom
