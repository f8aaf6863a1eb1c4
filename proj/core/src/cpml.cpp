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
#include "aocsim/cpml.hpp"

#include <algorithm>
#include <cmath>

#include "aocsim/constants.hpp"

namespace aocsim::fdtd {

double CpmlParams::sigma_max(double cell_size) const {
  return sigma_scale * 0.8 * (order + 1.0) / (constants::eta0 * cell_size);
}

CpmlCoefficients cpml_coefficients(const CpmlParams& params, double cell_size, double dt, double depth) {
  const double thickness = params.cells * cell_size;
  if (thickness <= 0.0 || depth <= 0.0) return {};
  const double x = std::clamp(depth / thickness, 0.0, 1.0);
  const double sigma = params.sigma_max(cell_size) * std::pow(x, params.order);
  const double alpha = 2.0 * constants::pi * params.alpha_hz * constants::eps0 * (1.0 - x);
  const double b = std::exp(-(sigma + alpha) * dt / constants::eps0);
  const double a = sigma > 0.0 ? sigma / (sigma + alpha) * (b - 1.0) : 0.0;
  return {float(a), float(b)};
}

}  // namespace aocsim::fdtd
