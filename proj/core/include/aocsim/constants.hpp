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

#include <numbers>

namespace aocsim::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c0 = 299792458.0;             // m/s
inline constexpr double mu0 = 1.25663706212e-6;       // H/m
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0);  // F/m
inline constexpr double eta0 = mu0 * c0;              // ohm

/// Carrier frequency of the reference design.
inline constexpr double carrier_hz = 290e9;

inline constexpr double um = 1e-6;
inline constexpr double ghz = 1e9;

constexpr double free_space_wavelength(double frequency_hz) { return c0 / frequency_hz; }

}  // namespace aocsim::constants
