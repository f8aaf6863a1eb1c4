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

// Convolutional PML grading profiles (CFS form with kappa = 1).

#include <vector>

namespace aocsim::fdtd {

struct CpmlParams {
  int cells = 10;
  double order = 3.0;          // polynomial grading order
  double sigma_scale = 1.0;    // multiplier on the optimal sigma_max
  double alpha_hz = 10e9;      // CFS shift expressed as a frequency

  double sigma_max(double cell_size) const;
};

// Recursive-convolution coefficients psi <- b*psi + a*delta at one depth.
struct CpmlCoefficients {
  float a = 0.0f;
  float b = 1.0f;
};

/// Coefficients for a point at `depth` meters inside a layer of
/// `params.cells` cells (depth 0 is the interior interface).
CpmlCoefficients cpml_coefficients(const CpmlParams& params, double cell_size, double dt, double depth);

}  // namespace aocsim::fdtd
