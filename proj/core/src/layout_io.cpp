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
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"
#include "aocsim/geometry.hpp"

namespace aocsim::geom {

namespace {
constexpr double kUm = constants::um;
}

std::string format_layout(const PlanarLayout& layout) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "# aocsim layout v1\n";
  os << "# lengths in micrometres, origin at the footprint lower-left corner\n";
  os << "# rect <tag> <x0> <y0> <x1> <y1>; metal = ground minus aperture tags\n";
  os << "stage " << layout.stage << "\n";
  os << "footprint " << layout.footprint.width / kUm << " " << layout.footprint.length / kUm << "\n";
  os << "feed " << layout.feed.signal_width / kUm << " " << layout.feed.gap / kUm << " " << layout.feed.center_x / kUm
     << " " << layout.feed.length / kUm << "\n";
  for (const auto& r : layout.rects)
    os << "rect " << to_string(r.tag) << " " << r.x0 / kUm << " " << r.y0 / kUm << " " << r.x1 / kUm << " "
       << r.y1 / kUm << "\n";
  return os.str();
}

PlanarLayout parse_layout(std::string_view text) {
  PlanarLayout layout;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_stage = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto fail = [&]() { throw ConfigError("layout line " + std::to_string(line_no) + ": cannot parse '" + line + "'"); };
    if (key == "stage") {
      if (!(ls >> layout.stage)) fail();
      have_stage = true;
    } else if (key == "footprint") {
      if (!(ls >> layout.footprint.width >> layout.footprint.length)) fail();
      layout.footprint.width *= kUm;
      layout.footprint.length *= kUm;
    } else if (key == "feed") {
      auto& f = layout.feed;
      if (!(ls >> f.signal_width >> f.gap >> f.center_x >> f.length)) fail();
      f.signal_width *= kUm;
      f.gap *= kUm;
      f.center_x *= kUm;
      f.length *= kUm;
    } else if (key == "rect") {
      std::string tag;
      Rect r{};
      if (!(ls >> tag >> r.x0 >> r.y0 >> r.x1 >> r.y1)) fail();
      const auto t = parse_tag(tag);
      if (!t) fail();
      r.tag = *t;
      r.x0 *= kUm;
      r.y0 *= kUm;
      r.x1 *= kUm;
      r.y1 *= kUm;
      layout.rects.push_back(r);
    } else {
      fail();
    }
  }
  if (!have_stage) throw ConfigError("layout description has no 'stage' line");
  return layout;
}

}  // namespace aocsim::geom
