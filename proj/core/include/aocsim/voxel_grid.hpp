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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aocsim/constants.hpp"
#include "aocsim/effective_medium.hpp"
#include "aocsim/geometry.hpp"

namespace aocsim::geom {

enum class MetalModel { pec, sheet };

// Vertical material stack of the chip, bottom to top:
// substrate | BEOL (homogenized dummy fill) | radiator plane | passivation.
struct ChipStack {
  double substrate_thickness = 100e-6;
  em::HostMedium substrate{11.9, 10.0};
  double beol_thickness = 8e-6;
  double beol_permittivity = 4.2;
  double beol_conductivity = 0.0;
  double passivation_thickness = 2e-6;
  double passivation_permittivity = 7.0;
  double air_margin = constants::free_space_wavelength(constants::carrier_hz) / 3.0;
  double chip_margin = 0.0;  // lateral substrate extension beyond the footprint
  MetalModel metal_model = MetalModel::pec;
  double sheet_conductance = 5.8e7 * 3e-6;  // S per square, sheet mode only

  void validate() const;
  // Plain dielectric layers only; used by the vacuum identity checks.
  static ChipStack vacuum();
};

struct Material {
  std::string name;
  double relative_permittivity;
  double conductivity;
  bool operator==(const Material&) const = default;
};

// One branch of a lumped port: Ex edges (grid indices) in series across a
// CPW gap. orientation = +1 when +x points from signal to ground.
struct FeedGap {
  int orientation = 1;
  std::vector<std::array<int, 3>> edges;
};

struct VoxelGrid {
  double cell_size = 0.0;
  std::array<int, 3> dims{0, 0, 0};
  int absorber_cells = 0;
  std::vector<Material> materials;
  std::vector<std::uint8_t> cells;  // material index, x fastest
  int metal_plane_k = -1;           // node plane of the radiator, -1 if none
  std::vector<std::uint8_t> metal;  // nx*ny face mask on metal_plane_k
  MetalModel metal_model = MetalModel::pec;
  double sheet_conductance = 0.0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};  // position of node (0,0,0) in layout coordinates
  std::vector<FeedGap> feed;
  std::array<int, 2> chip_x{0, 0}, chip_y{0, 0}, chip_z{0, 0};  // cell ranges [lo, hi) of the chip block
  std::vector<std::string> warnings;

  std::size_t cell_count() const { return std::size_t(dims[0]) * dims[1] * dims[2]; }
  std::size_t index(int i, int j, int k) const { return (std::size_t(k) * dims[1] + j) * dims[0] + i; }
  const Material& material_at(int i, int j, int k) const { return materials[cells[index(i, j, k)]]; }
  bool metal_at(int i, int j) const { return !metal.empty() && metal[std::size_t(j) * dims[0] + i] != 0; }
  std::size_t metal_cell_count() const;

  // Uniform grid of a single material, no metal, no feed.
  static VoxelGrid uniform(std::array<int, 3> dims, double cell_size, Material m = {"air", 1.0, 0.0});
};

struct RasterOptions {
  int absorber_cells = 10;
  double memory_budget_bytes = 3.0e9;
};

// Bytes the solver needs per voxel (fields, coefficient indices, materials).
double estimated_solver_bytes(std::array<int, 3> dims);

/// Rasterize layout + stack by cell-centre sampling. The radiator is a
/// zero-thickness sheet on a node plane at the top of the BEOL.
VoxelGrid rasterize(const PlanarLayout& layout, const ChipStack& stack, double cell_size,
                    const RasterOptions& options = {});

// Binary voxel file: 64-byte little-endian header, material indices, then
// the material table, radiator mask and feed description.
void write_voxel_grid(std::ostream& out, const VoxelGrid& grid);
VoxelGrid read_voxel_grid(std::istream& in);

}  // namespace aocsim::geom
