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
#include "aocsim/sparams.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"

namespace aocsim::sparams {

double PortSpectrum::accepted_power(std::size_t i) const {
  return 0.5 * (voltage.at(i) * std::conj(current.at(i))).real();
}

std::vector<cdouble> dft(std::span<const double> samples, double dt, double time_offset,
                         std::span<const double> frequencies) {
  std::vector<cdouble> out;
  out.reserve(frequencies.size());
  for (double f : frequencies) {
    // Recurrence on the unit phasor, renormalized to hold |w| = 1.
    const double w = 2.0 * constants::pi * f;
    const cdouble rot = std::polar(1.0, -w * dt);
    cdouble ph = std::polar(1.0, -w * time_offset);
    cdouble acc{};
    for (std::size_t n = 0; n < samples.size(); ++n) {
      acc += samples[n] * ph;
      ph *= rot;
      if ((n & 1023) == 1023) ph = std::polar(1.0, -w * (time_offset + double(n + 1) * dt));
    }
    out.push_back(acc * dt);
  }
  return out;
}

PortSpectrum port_spectrum(const fdtd::PortRecord& port, std::span<const double> frequencies) {
  PortSpectrum s;
  s.frequencies.assign(frequencies.begin(), frequencies.end());
  s.voltage = dft(port.voltage, port.dt, port.time_offset, frequencies);
  s.current = dft(port.current, port.dt, port.time_offset, frequencies);
  s.source = dft(port.source, port.dt, port.time_offset, frequencies);
  return s;
}

std::vector<cdouble> extract_s11(const fdtd::PortRecord& port, std::span<const double> frequencies,
                                 const fdtd::PortRecord* reference) {
  if (port.voltage.empty()) throw MissingReferenceError("port record holds no voltage samples");
  const double z0 = port.reference_impedance;
  const auto v = dft(port.voltage, port.dt, port.time_offset, frequencies);
  std::vector<cdouble> s11(frequencies.size());
  if (reference) {
    if (reference->voltage.empty()) throw MissingReferenceError("reference record holds no voltage samples");
    const auto v_inc = dft(reference->voltage, reference->dt, reference->time_offset, frequencies);
    for (std::size_t i = 0; i < s11.size(); ++i) s11[i] = (v[i] - v_inc[i]) / v_inc[i];
    return s11;
  }
  if (port.current.size() != port.voltage.size())
    throw MissingReferenceError(
        "port current was not recorded; run the matched reference feed first and pass it as the reference "
        "record (two-pass procedure)");
  const auto i = dft(port.current, port.dt, port.time_offset, frequencies);
  for (std::size_t k = 0; k < s11.size(); ++k) s11[k] = (v[k] - z0 * i[k]) / (v[k] + z0 * i[k]);
  return s11;
}

cdouble input_impedance(cdouble s11, double z0) {
  if (s11 == cdouble(1.0, 0.0)) throw SingularityError("s11 = 1 (open circuit): input impedance is infinite");
  return z0 * (1.0 + s11) / (1.0 - s11);
}

void write_touchstone(std::ostream& out, const Touchstone& data) {
  if (data.frequencies.size() != data.s11.size()) throw DomainError("touchstone frequency and S11 lengths differ");
  char line[128];
  std::snprintf(line, sizeof line, "# GHz S RI R %g\n", data.reference_impedance);
  out << line;
  for (std::size_t i = 0; i < data.s11.size(); ++i) {
    std::snprintf(line, sizeof line, "%.6f %.12e %.12e\n", data.frequencies[i] / 1e9, data.s11[i].real(),
                  data.s11[i].imag());
    out << line;
  }
}

Touchstone read_touchstone(std::istream& in) {
  Touchstone t;
  std::string line;
  bool header = false;
  double scale = 1e9;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '!') continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, unit, kind, fmt, r;
      ls >> hash >> unit >> kind >> fmt >> r >> t.reference_impedance;
      if (unit == "Hz" || unit == "HZ") scale = 1.0;
      else if (unit == "MHz" || unit == "MHZ") scale = 1e6;
      else if (unit != "GHz" && unit != "GHZ") throw ConfigError("unsupported Touchstone unit: " + unit);
      if (kind != "S" || fmt != "RI") throw ConfigError("only S-parameter RI Touchstone files are supported");
      header = true;
      continue;
    }
    double f, re, im;
    if (!(ls >> f >> re >> im)) throw ConfigError("malformed Touchstone line: " + line);
    t.frequencies.push_back(f * scale);
    t.s11.emplace_back(re, im);
  }
  if (!header) throw ConfigError("Touchstone option line missing");
  return t;
}

}  // namespace aocsim::sparams
