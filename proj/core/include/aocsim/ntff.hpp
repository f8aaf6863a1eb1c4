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

// Near-to-far-field transformation on a closed box of tangential-field
// DFTs (surface equivalence: J = n x H, M = -n x E), exp(+j*omega*t).

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace aocsim::ntff {

using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

// One face of the equivalence box. Samples sit at face centres of the
// (b, c) node lattice, where (a, b, c) is the cyclic axis triple with a the
// face normal. Per frequency the data block holds E_b, E_c, H_b, H_c,
// each nu*nv values with u (along b) fastest.
struct FaceDft {
  int axis = 0;
  int side = -1;        // -1 for the low face, +1 for the high face
  double plane = 0.0;   // coordinate along the normal (m)
  double b0 = 0.0;      // coordinate of the first sample centre along b
  double c0 = 0.0;
  int nu = 0, nv = 0;
  std::vector<cfloat> data;

  std::size_t block() const { return std::size_t(nu) * nv; }
  cfloat* at(std::size_t freq, int comp) { return data.data() + (freq * 4 + comp) * block(); }
  const cfloat* at(std::size_t freq, int comp) const { return data.data() + (freq * 4 + comp) * block(); }
};

struct SurfaceDft {
  double cell_size = 0.0;           // sample spacing and patch size (m)
  std::vector<double> frequencies;  // Hz
  std::array<FaceDft, 6> faces;

  void allocate();
  // Net outward time-averaged power 1/2 Re(E x H*).n through the box.
  double flux(std::size_t freq) const;
};

struct AngularGrid {
  std::vector<double> theta_deg;  // 0..180 inclusive for sphere integration
  std::vector<double> phi_deg;    // 0..360 exclusive

  static AngularGrid uniform(double step_deg);
};

struct FarFieldSolution {
  double frequency_hz = 0.0;
  AngularGrid grid;
  // Pattern functions r*exp(jkr)*E, theta-major (index t*nphi + p).
  std::vector<cdouble> e_theta, e_phi;
  std::vector<double> intensity;    // U (W/sr)
  std::vector<double> directivity;  // linear
  double radiated_power = 0.0;      // integral of U over the sphere (W)
  double surface_power = 0.0;       // Poynting flux through the box (W)
  double accepted_power = 0.0;      // port power, filled by the caller (W)

  double peak_directivity() const;
  double peak_directivity_dbi() const;
  double efficiency() const { return accepted_power > 0.0 ? surface_power / accepted_power : 0.0; }
  std::size_t index(std::size_t t, std::size_t p) const { return t * grid.phi_deg.size() + p; }
};

/// Radiation integrals over the surface for one frequency.
FarFieldSolution near_to_far(const SurfaceDft& surface, std::size_t freq_index, const AngularGrid& grid);

/// Integral of U over the sphere (trapezoid in theta, periodic in phi).
double integrate_intensity(const AngularGrid& grid, std::span<const double> intensity);

/// Directivity from an intensity pattern; used for incoherent sums of
/// several far-field solutions.
std::vector<double> directivity_from_intensity(const AngularGrid& grid, std::span<const double> intensity);

}  // namespace aocsim::ntff
