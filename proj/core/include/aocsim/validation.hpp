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
#include <vector>

#include "aocsim/cpml.hpp"

namespace aocsim::validation {

struct ValidationOptions {
  double cell_size = 5e-6;
  double cfl = 0.99;
  fdtd::CpmlParams absorber{};
  int threads = 1;
  double f_min = 200e9, f_max = 400e9, f_step = 10e9;
  unsigned seed = 20260401;
};

struct ValidationItem {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string criterion;  // human-readable pass condition
  std::string detail;
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<ValidationItem> items;

  bool all_passed() const;
  std::string format() const;
};

std::vector<double> band(const ValidationOptions& opts);

// Individual experiments. Each returns the raw measurement so tests can
// inspect it; the *_item wrappers apply the pass criteria.

struct AdlIdentityResult {
  double no_layer_k_error = 0.0;    // max relative |k_eff - k_z| / |k_z|
  double no_layer_eps_error = 0.0;  // max relative |eps_eff - eps_host| / |eps_host|
  double forward_error = 0.0;       // max relative forward-substitution residual
  int samples = 0;
};
AdlIdentityResult adl_identities(unsigned seed, int samples = 1000);

struct ReflectionResult {
  std::vector<double> frequencies;
  std::vector<double> measured;  // |R|
  std::vector<double> analytic;  // |R| (Fresnel), zero for the absorber
};
// Plane wave in a periodic column onto a lossy silicon half-space.
ReflectionResult fresnel_column(const ValidationOptions& opts, double eps_r = 11.9, double sigma = 10.0);
// Plane wave onto the absorber terminating a vacuum column.
ReflectionResult absorber_column(const ValidationOptions& opts);

struct CavityResult {
  long steps = 0;
  double drift = 0.0;  // (max - min) / mean of the energy after source turn-off
  double mean_energy = 0.0;
};
CavityResult cavity_energy(const ValidationOptions& opts, long steps = 5000);

struct DipoleResult {
  double frequency_hz = 0.0;
  double peak_dbi = 0.0;
  double pattern_error = 0.0;  // max |D(theta)/D_max - sin^2(theta)| on the phi=0 cut
  double efficiency = 0.0;     // radiated over accepted, fed dipoles only
};
DipoleResult hertzian_dipole(const ValidationOptions& opts, double frequency_hz = 290e9);
DipoleResult half_wave_dipole(const ValidationOptions& opts, double length = 500e-6, double frequency_hz = 290e9);

ValidationItem adl_item(const ValidationOptions& opts);
ValidationItem fresnel_item(const ValidationOptions& opts);
ValidationItem absorber_item(const ValidationOptions& opts);
ValidationItem cavity_item(const ValidationOptions& opts);
ValidationItem hertzian_item(const ValidationOptions& opts);
ValidationItem half_wave_item(const ValidationOptions& opts);

/// Full oracle suite. Numerical instability inside an experiment is
/// reported as a failed item.
ValidationReport run_validation(const ValidationOptions& opts);

}  // namespace aocsim::validation
