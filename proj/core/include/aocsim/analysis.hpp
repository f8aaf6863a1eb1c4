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
#include <map>
#include <string>
#include <vector>

namespace aocsim::analysis {

using cdouble = std::complex<double>;

struct SpectrumResult {
  std::vector<double> frequencies;  // Hz, strictly increasing
  std::vector<cdouble> s11;
  std::vector<cdouble> z_in;
  std::vector<double> peak_directivity_dbi;  // optional, empty when no far field
  std::vector<double> efficiency;            // optional

  // Throws DomainError unless populated sequences share one length and
  // frequencies strictly increase.
  void validate() const;
};

struct Band {
  double lo_hz = 0.0, hi_hz = 0.0;
  double width() const { return hi_hz - lo_hz; }
};

struct BandwidthReport {
  std::vector<Band> bands;  // every sub-band below threshold, ascending
  int widest = -1;          // index into bands, -1 when empty
  double absolute_bw = 0.0;  // Hz, widest band
  double fractional_bw = 0.0;  // absolute_bw / reference frequency
  double threshold_db = -10.0;
  double reference_hz = 290e9;

  bool empty() const { return bands.empty(); }
};

/// Sub-bands with |S11| below `threshold_db`; edges by linear
/// interpolation of |S11| in dB between samples.
BandwidthReport impedance_bandwidth(const SpectrumResult& spectrum, double threshold_db = -10.0,
                                    double reference_hz = 290e9);

struct StageMetrics {
  double peak_directivity_db = 0.0;
  double length_mm = 0.0, width_mm = 0.0;  // short side first
  double bandwidth_ghz = 0.0;
};

struct StageReport {
  std::string text;
  bool trend_violation = false;
  std::vector<std::string> violations;
};

/// Comparison table with one column per stage. Bandwidth must grow
/// strictly with stage; otherwise the table carries a trend warning.
StageReport stage_report(const std::map<int, StageMetrics>& stages);

/// Stage metrics from a spectrum: directivity at the sample nearest to
/// `carrier_hz`, bandwidth from the widest sub-band.
StageMetrics summarize_stage(const SpectrumResult& spectrum, double length_mm, double width_mm,
                             double threshold_db = -10.0, double carrier_hz = 290e9);

struct EfficiencyPeak {
  double frequency_hz = 0.0;
  double value = 0.0;
  bool plateau = false;  // maximum shared by adjacent samples
  bool edge = false;     // maximum at the first or last sample
  bool decreases_after = false;  // every later sample lies below the peak value
};

/// Discrete maximum refined by the parabola through it and its neighbours.
EfficiencyPeak efficiency_peak(const SpectrumResult& spectrum);

/// Vertex (x, y) of the parabola through three points.
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2);

struct SmithPoint {
  double frequency_hz, re, im;
};

std::vector<SmithPoint> smith_export(const SpectrumResult& spectrum);

/// Sign changes of Im(Gamma) along the locus; zeros are skipped.
int imag_sign_changes(const std::vector<SmithPoint>& locus);

}  // namespace aocsim::analysis
