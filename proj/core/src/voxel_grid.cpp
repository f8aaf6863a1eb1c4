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
#include "aocsim/voxel_grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "aocsim/error.hpp"

namespace aocsim::geom {

static_assert(std::endian::native == std::endian::little, "voxel files are written in host (little-endian) order");

void ChipStack::validate() const {
  auto positive_or_zero = [](double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError(std::string(what) + " must be non-negative");
  };
  positive_or_zero(substrate_thickness, "substrate thickness");
  positive_or_zero(beol_thickness, "BEOL thickness");
  positive_or_zero(passivation_thickness, "passivation thickness");
  positive_or_zero(air_margin, "air margin");
  positive_or_zero(chip_margin, "chip margin");
  substrate.validate();
  if (!(beol_permittivity >= 1.0) || !(passivation_permittivity >= 1.0))
    throw ConfigError("layer permittivities must be >= 1");
  positive_or_zero(beol_conductivity, "BEOL conductivity");
  if (metal_model == MetalModel::sheet && !(sheet_conductance > 0.0))
    throw ConfigError("sheet metal model needs a positive sheet conductance");
}

ChipStack ChipStack::vacuum() {
  ChipStack s;
  s.substrate = {1.0, 0.0};
  s.beol_permittivity = 1.0;
  s.passivation_permittivity = 1.0;
  return s;
}

std::size_t VoxelGrid::metal_cell_count() const {
  std::size_t n = 0;
  for (auto m : metal) n += m != 0;
  return n;
}

VoxelGrid VoxelGrid::uniform(std::array<int, 3> dims, double cell_size, Material m) {
  VoxelGrid g;
  g.dims = dims;
  g.cell_size = cell_size;
  g.materials = {std::move(m)};
  g.cells.assign(g.cell_count(), 0);
  return g;
}

double estimated_solver_bytes(std::array<int, 3> dims) {
  const double nodes = double(dims[0] + 1) * (dims[1] + 1) * (dims[2] + 1);
  return nodes * (6 * sizeof(float) + 3 * sizeof(std::uint16_t) + 1);
}

VoxelGrid rasterize(const PlanarLayout& layout, const ChipStack& stack, double cell, const RasterOptions& options) {
  stack.validate();
  if (!(cell > 0.0)) throw ConfigError("cell size must be positive");
  if (options.absorber_cells < 0) throw ConfigError("absorber thickness must be non-negative");

  VoxelGrid g;
  g.cell_size = cell;
  g.absorber_cells = options.absorber_cells;
  g.metal_model = stack.metal_model;
  g.sheet_conductance = stack.sheet_conductance;
  const int npml = options.absorber_cells;
  const int air = int(std::ceil(stack.air_margin / cell - 1e-9));

  auto cells_for = [&](double length, const char* what) {
    const double n = length / cell;
    const int r = int(std::lround(n));
    if (std::abs(n - r) > 1e-6) {
      std::ostringstream os;
      os << what << " of " << length * 1e6 << " um is not a multiple of the " << cell * 1e6
         << " um cell; rounded to " << r << " cells";
      g.warnings.push_back(os.str());
    }
    return r;
  };

  const int chip_nx = cells_for(layout.footprint.width + 2 * stack.chip_margin, "chip width");
  const int chip_ny = cells_for(layout.footprint.length + 2 * stack.chip_margin, "chip length");
  const double below = stack.substrate_thickness + stack.beol_thickness;
  const int below_cells = int(std::ceil(below / cell - 1e-9));
  const int above_cells = int(std::ceil(stack.passivation_thickness / cell - 1e-9));

  g.dims = {2 * (npml + air) + chip_nx, 2 * (npml + air) + chip_ny, 2 * (npml + air) + below_cells + above_cells};
  const int k_metal = npml + air + below_cells;
  g.metal_plane_k = k_metal;
  g.origin = {-stack.chip_margin - (npml + air) * cell, -stack.chip_margin - (npml + air) * cell,
              below - k_metal * cell};
  g.chip_x = {npml + air, npml + air + chip_nx};
  g.chip_y = {npml + air, npml + air + chip_ny};

  const double bytes = estimated_solver_bytes(g.dims);
  if (bytes > options.memory_budget_bytes) {
    const double suggested = cell * std::cbrt(bytes / options.memory_budget_bytes) * 1.05;
    std::ostringstream os;
    os << "grid " << g.dims[0] << "x" << g.dims[1] << "x" << g.dims[2] << " needs about " << bytes / 1e6
       << " MB, above the " << options.memory_budget_bytes / 1e6 << " MB budget; try a cell size of at least "
       << suggested * 1e6 << " um";
    throw SizingError(os.str());
  }

  g.materials = {{"air", 1.0, 0.0},
                 {"substrate", stack.substrate.relative_permittivity, stack.substrate.conductivity},
                 {"beol", stack.beol_permittivity, stack.beol_conductivity},
                 {"passivation", stack.passivation_permittivity, 0.0}};
  const double z_beol = stack.substrate_thickness;
  const double z_pass = below;
  const double z_top = below + stack.passivation_thickness;

  auto layer_of = [&](double z) -> std::uint8_t {
    if (z >= 0.0 && z < z_beol) return 1;
    if (z >= z_beol && z < z_pass) return 2;
    if (z >= z_pass && z < z_top) return 3;
    return 0;
  };

  g.cells.assign(g.cell_count(), 0);
  std::array<bool, 4> layer_seen{true, false, false, false};
  int kmin = g.dims[2], kmax = -1;
  for (int k = 0; k < g.dims[2]; ++k) {
    const std::uint8_t m = layer_of(g.origin[2] + (k + 0.5) * cell);
    if (m == 0) continue;
    layer_seen[m] = true;
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
    for (int j = g.chip_y[0]; j < g.chip_y[1]; ++j)
      for (int i = g.chip_x[0]; i < g.chip_x[1]; ++i) g.cells[g.index(i, j, k)] = m;
  }
  g.chip_z = {kmin, kmax + 1};
  const std::array<std::pair<const char*, double>, 4> layers{
      std::pair{"", 0.0}, {"substrate", stack.substrate_thickness}, {"BEOL", stack.beol_thickness},
      {"passivation", stack.passivation_thickness}};
  for (int m = 1; m < 4; ++m)
    if (!layer_seen[m] && layers[m].second > 0.0)
      g.warnings.push_back(std::string(layers[m].first) + " layer is thinner than the cell sampling and vanished");

  g.metal.assign(std::size_t(g.dims[0]) * g.dims[1], 0);
  for (int j = 0; j < g.dims[1]; ++j) {
    const double y = g.origin[1] + (j + 0.5) * cell;
    for (int i = 0; i < g.dims[0]; ++i) {
      const double x = g.origin[0] + (i + 0.5) * cell;
      if (layout.is_metal(x, y)) g.metal[std::size_t(j) * g.dims[0] + i] = 1;
    }
  }

  if (layout.min_feature() < 2.0 * cell) {
    std::ostringstream os;
    os << "smallest feature " << layout.min_feature() * 1e6 << " um spans fewer than 2 cells of " << cell * 1e6
       << " um";
    g.warnings.push_back(os.str());
  }

  const int j_port = int(std::lround((0.0 - g.origin[1]) / cell));
  for (const auto& r : layout.with_tag(RectTag::cpw_gap)) {
    if (r.y0 != 0.0) continue;
    FeedGap gap;
    gap.orientation = 0.5 * (r.x0 + r.x1) < layout.feed.center_x ? -1 : +1;
    for (int i = 0; i < g.dims[0]; ++i) {
      const double x = g.origin[0] + (i + 0.5) * cell;
      if (x >= r.x0 && x < r.x1) gap.edges.push_back({i, j_port, k_metal});
    }
    if (gap.edges.empty())
      throw GeometryError("CPW gap of " + std::to_string(r.width() * 1e6) + " um is not resolved by the grid");
    g.feed.push_back(std::move(gap));
  }
  return g;
}

namespace {

constexpr char kMagic[8] = {'A', 'O', 'C', 'V', 'O', 'X', 'E', 'L'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("voxel file is truncated");
  return v;
}

}  // namespace

void write_voxel_grid(std::ostream& out, const VoxelGrid& g) {
  const auto start = out.tellp();
  out.write(kMagic, 8);
  put<std::uint32_t>(out, kVersion);
  for (int d : g.dims) put<std::uint32_t>(out, std::uint32_t(d));
  put<double>(out, g.cell_size);
  put<std::uint32_t>(out, std::uint32_t(g.materials.size()));
  put<std::int32_t>(out, g.metal_plane_k);
  put<std::uint32_t>(out, std::uint32_t(g.absorber_cells));
  put<std::uint32_t>(out, g.metal_model == MetalModel::pec ? 0u : 1u);
  put<double>(out, g.sheet_conductance);
  put<std::uint32_t>(out, std::uint32_t(g.feed.size()));
  put<std::uint32_t>(out, 0u);
  if (start >= 0 && out.tellp() - start != 64) throw std::logic_error("voxel header is not 64 bytes");

  out.write(reinterpret_cast<const char*>(g.cells.data()), std::streamsize(g.cells.size()));
  for (const auto& m : g.materials) {
    put<double>(out, m.relative_permittivity);
    put<double>(out, m.conductivity);
    put<std::uint32_t>(out, std::uint32_t(m.name.size()));
    out.write(m.name.data(), std::streamsize(m.name.size()));
  }
  if (g.metal_plane_k >= 0) out.write(reinterpret_cast<const char*>(g.metal.data()), std::streamsize(g.metal.size()));
  for (double o : g.origin) put<double>(out, o);
  for (auto r : {g.chip_x, g.chip_y, g.chip_z})
    for (int v : r) put<std::int32_t>(out, v);
  for (const auto& gap : g.feed) {
    put<std::int32_t>(out, gap.orientation);
    put<std::uint32_t>(out, std::uint32_t(gap.edges.size()));
    for (const auto& e : gap.edges)
      for (int v : e) put<std::int32_t>(out, v);
  }
}

VoxelGrid read_voxel_grid(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("not an aocsim voxel file (bad magic)");
  if (get<std::uint32_t>(in) != kVersion) throw ConfigError("unsupported voxel file version");
  VoxelGrid g;
  for (int& d : g.dims) d = int(get<std::uint32_t>(in));
  g.cell_size = get<double>(in);
  const auto material_count = get<std::uint32_t>(in);
  g.metal_plane_k = get<std::int32_t>(in);
  g.absorber_cells = int(get<std::uint32_t>(in));
  g.metal_model = get<std::uint32_t>(in) == 0 ? MetalModel::pec : MetalModel::sheet;
  g.sheet_conductance = get<double>(in);
  const auto gap_count = get<std::uint32_t>(in);
  (void)get<std::uint32_t>(in);

  g.cells.resize(g.cell_count());
  in.read(reinterpret_cast<char*>(g.cells.data()), std::streamsize(g.cells.size()));
  if (!in) throw ConfigError("voxel file is truncated");
  for (std::uint32_t m = 0; m < material_count; ++m) {
    Material mat;
    mat.relative_permittivity = get<double>(in);
    mat.conductivity = get<double>(in);
    mat.name.resize(get<std::uint32_t>(in));
    in.read(mat.name.data(), std::streamsize(mat.name.size()));
    g.materials.push_back(std::move(mat));
  }
  if (g.metal_plane_k >= 0) {
    g.metal.resize(std::size_t(g.dims[0]) * g.dims[1]);
    in.read(reinterpret_cast<char*>(g.metal.data()), std::streamsize(g.metal.size()));
  }
  for (double& o : g.origin) o = get<double>(in);
  for (auto* r : {&g.chip_x, &g.chip_y, &g.chip_z})
    for (int& v : *r) v = get<std::int32_t>(in);
  for (std::uint32_t n = 0; n < gap_count; ++n) {
    FeedGap gap;
    gap.orientation = get<std::int32_t>(in);
    gap.edges.resize(get<std::uint32_t>(in));
    for (auto& e : gap.edges)
      for (int& v : e) v = get<std::int32_t>(in);
    g.feed.push_back(std::move(gap));
  }
  for (auto c : g.cells)
    if (c >= g.materials.size()) throw ConfigError("voxel file references an unknown material index");
  return g;
}

}  // namespace aocsim::geom
