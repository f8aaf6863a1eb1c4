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

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "aocsim/fdtd.hpp"

namespace aocsim::sparams {

using cdouble = std::complex<double>;

// Port phasors on the DFT convention X(f) = sum x(t) exp(-j 2 pi f t) dt.
struct PortSpectrum {
  std::vector<double> frequencies;
  std::vector<cdouble> voltage, current, source;

  // Time-averaged power delivered into the antenna, 1/2 Re(V I*).
  double accepted_power(std::size_t i) const;
};

std::vector<cdouble> dft(std::span<const double> samples, double dt, double time_offset,
                         std::span<const double> frequencies);

PortSpectrum port_spectrum(const fdtd::PortRecord& port, std::span<const double> frequencies);

/// Reflection coefficient at the port reference impedance. Without a
/// reference run the recorded port current gives the power-wave split;
/// with one, the incident voltage is taken from the matched reference.
std::vector<cdouble> extract_s11(const fdtd::PortRecord& port, std::span<const double> frequencies,
                                 const fdtd::PortRecord* reference = nullptr);

cdouble input_impedance(cdouble s11, double z0);

struct Touchstone {
  double reference_impedance = 50.0;
  std::vector<double> frequencies;  // Hz
  std::vector<cdouble> s11;
};

// Header `# GHz S RI R 50`, then `f_ghz re im` per line.
void write_touchstone(std::ostream& out, const Touchstone& data);
Touchstone read_touchstone(std::istream& in);

}  // namespace aocsim::sparams
