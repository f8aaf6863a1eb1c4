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
#include "aocsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aocsim/error.hpp"

namespace aocsim::analysis {

void SpectrumResult::validate() const {
  const std::size_t n = frequencies.size();
  if (s11.size() != n) throw DomainError("S11 and frequency lengths differ");
  if (!z_in.empty() && z_in.size() != n) throw DomainError("input impedance and frequency lengths differ");
  if (!peak_directivity_dbi.empty() && peak_directivity_dbi.size() != n)
    throw DomainError("directivity and frequency lengths differ");
  if (!efficiency.empty() && efficiency.size() != n) throw DomainError("efficiency and frequency lengths differ");
  for (std::size_t i = 1; i < n; ++i)
    if (!(frequencies[i] > frequencies[i - 1])) throw DomainError("frequencies must increase strictly");
}

BandwidthReport impedance_bandwidth(const SpectrumResult& spectrum, double threshold_db, double reference_hz) {
  spectrum.validate();
  if (!(reference_hz > 0.0)) throw DomainError("reference frequency must be positive");
  BandwidthReport rep;
  rep.threshold_db = threshold_db;
  rep.reference_hz = reference_hz;
  const auto& f = spectrum.frequencies;
  const std::size_t n = f.size();
  if (n == 0) return rep;
  std::vector<double> db(n);
  for (std::size_t i = 0; i < n; ++i) db[i] = 20.0 * std::log10(std::abs(spectrum.s11[i]));
  auto crossing = [&](std::size_t i) {  // between i-1 and i
    const double t = (threshold_db - db[i - 1]) / (db[i] - db[i - 1]);
    return f[i - 1] + t * (f[i] - f[i - 1]);
  };
  bool inside = false;
  Band cur;
  for (std::size_t i = 0; i < n; ++i) {
    const bool below = db[i] < threshold_db;
    if (below && !inside) {
      cur.lo_hz = i == 0 ? f[0] : crossing(i);
      inside = true;
    } else if (!below && inside) {
      cur.hi_hz = crossing(i);
      rep.bands.push_back(cur);
      inside = false;
    }
  }
  if (inside) {
    cur.hi_hz = f[n - 1];
    rep.bands.push_back(cur);
  }
  for (std::size_t b = 0; b < rep.bands.size(); ++b)
    if (rep.widest < 0 || rep.bands[b].width() > rep.bands[std::size_t(rep.widest)].width()) rep.widest = int(b);
  if (rep.widest >= 0) {
    rep.absolute_bw = rep.bands[std::size_t(rep.widest)].width();
    rep.fractional_bw = rep.absolute_bw / reference_hz;
  }
  return rep;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string footprint(const StageMetrics& m) { return fmt("%g", m.length_mm) + "*" + fmt("%g", m.width_mm); }

}  // namespace

StageReport stage_report(const std::map<int, StageMetrics>& stages) {
  if (stages.empty()) throw DomainError("stage report needs at least one stage");
  StageReport rep;
  std::vector<std::vector<std::string>> rows = {
      {"Design"}, {"Peak Dir. [dB]"}, {"L x W [mm]"}, {"Bandwidth [GHz]"}};
  for (const auto& [stage, m] : stages) {
    rows[0].push_back("Stage " + std::to_string(stage));
    rows[1].push_back(fmt("%.1f", m.peak_directivity_db));
    rows[2].push_back(footprint(m));
    rows[3].push_back(fmt("%.0f", m.bandwidth_ghz));
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) line += " | ";
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size(), ' ');
    }
    os << line << '\n';
  }
  if (stages.size() >= 2) {
    auto prev = stages.begin();
    for (auto it = std::next(prev); it != stages.end(); prev = it, ++it)
      if (!(it->second.bandwidth_ghz > prev->second.bandwidth_ghz)) {
        rep.trend_violation = true;
        rep.violations.push_back("bandwidth does not increase from stage " + std::to_string(prev->first) +
                                 " (" + fmt("%.1f", prev->second.bandwidth_ghz) + " GHz) to stage " +
                                 std::to_string(it->first) + " (" + fmt("%.1f", it->second.bandwidth_ghz) +
                                 " GHz)");
      }
  }
  for (const auto& v : rep.violations) os << "!! TREND VIOLATION: " << v << '\n';
  rep.text = os.str();
  return rep;
}

StageMetrics summarize_stage(const SpectrumResult& spectrum, double length_mm, double width_mm,
                             double threshold_db, double carrier_hz) {
  StageMetrics m;
  m.length_mm = length_mm;
  m.width_mm = width_mm;
  m.bandwidth_ghz = impedance_bandwidth(spectrum, threshold_db, carrier_hz).absolute_bw / 1e9;
  if (!spectrum.peak_directivity_dbi.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < spectrum.frequencies.size(); ++i)
      if (std::abs(spectrum.frequencies[i] - carrier_hz) < std::abs(spectrum.frequencies[best] - carrier_hz))
        best = i;
    m.peak_directivity_db = spectrum.peak_directivity_dbi[best];
  }
  return m;
}

std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  // Divided differences: y = y0 + d1 (x - x0) + d2 (x - x0)(x - x1).
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double d2 = (d12 - d01) / (x2 - x0);
  if (d2 == 0.0) throw DomainError("points are collinear; no parabola vertex");
  const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * d2);
  const double yv = y0 + d01 * (xv - x0) + d2 * (xv - x0) * (xv - x1);
  return {xv, yv};
}

EfficiencyPeak efficiency_peak(const SpectrumResult& spectrum) {
  spectrum.validate();
  const auto& e = spectrum.efficiency;
  const auto& f = spectrum.frequencies;
  if (e.size() < 10) throw DomainError("efficiency peak needs at least 10 samples");
  const std::size_t n = e.size();
  std::size_t m = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (e[i] > e[m]) m = i;
  EfficiencyPeak p;
  p.frequency_hz = f[m];
  p.value = e[m];
  p.decreases_after = m + 1 < n;
  for (std::size_t i = m + 1; i < n; ++i)
    if (!(e[i] < e[m])) p.decreases_after = false;
  // m is the first maximum, so a plateau can only extend upwards.
  if (m + 1 < n && e[m + 1] == e[m]) {
    p.plateau = true;
    p.edge = m == 0;
    return p;
  }
  if (m == 0 || m + 1 == n) {
    p.edge = true;
    return p;
  }
  const auto [xv, yv] = parabola_vertex(f[m - 1], e[m - 1], f[m], e[m], f[m + 1], e[m + 1]);
  p.frequency_hz = xv;
  p.value = yv;
  return p;
}

std::vector<SmithPoint> smith_export(const SpectrumResult& spectrum) {
  spectrum.validate();
  std::vector<SmithPoint> out;
  out.reserve(spectrum.s11.size());
  for (std::size_t i = 0; i < spectrum.s11.size(); ++i)
    out.push_back({spectrum.frequencies[i], spectrum.s11[i].real(), spectrum.s11[i].imag()});
  return out;
}

int imag_sign_changes(const std::vector<SmithPoint>& locus) {
  int changes = 0, last = 0;
  for (const auto& p : locus) {
    const int s = p.im > 0.0 ? 1 : p.im < 0.0 ? -1 : 0;
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace aocsim::analysis
