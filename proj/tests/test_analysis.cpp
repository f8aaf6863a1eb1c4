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
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "aocsim/analysis.hpp"
#include "aocsim/error.hpp"
#include "aocsim/pipeline.hpp"

using namespace aocsim;
using namespace aocsim::analysis;

namespace {

std::complex<double> from_db(double db) { return {std::pow(10.0, db / 20.0), 0.0}; }

SpectrumResult spectrum_db(double f0, double f1, double df, const std::function<double(double)>& db_of_ghz) {
  SpectrumResult s;
  const int n = int(std::lround((f1 - f0) / df));
  for (int i = 0; i <= n; ++i) {
    const double f = f0 + i * df;
    s.frequencies.push_back(f);
    s.s11.push_back(from_db(db_of_ghz(f / 1e9)));
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ImpedanceBandwidth, SyntheticStepBand) {
  // -15 dB on [240, 354] GHz and -5 dB elsewhere, sampled at 1 MHz.
  const auto s = spectrum_db(200e9, 400e9, 1e6, [](double g) { return g >= 240.0 && g <= 354.0 ? -15.0 : -5.0; });
  const auto r = impedance_bandwidth(s);
  ASSERT_EQ(r.bands.size(), 1u);
  EXPECT_EQ(r.widest, 0);
  EXPECT_NEAR(r.absolute_bw, 114e9, 2e6);
  EXPECT_NEAR(r.fractional_bw, 114.0 / 290.0, 1e-5);
  EXPECT_EQ(std::lround(r.fractional_bw * 1000.0), 393);
}

TEST(ImpedanceBandwidth, NeverMatchedIsEmpty) {
  const auto s = spectrum_db(200e9, 400e9, 5e9, [](double) { return -3.0; });
  const auto r = impedance_bandwidth(s);
  EXPECT_TRUE(r.empty());
  EXPECT_EQ(r.widest, -1);
  EXPECT_EQ(r.absolute_bw, 0.0);
  EXPECT_EQ(r.fractional_bw, 0.0);
}

TEST(ImpedanceBandwidth, LinearInterpolationOracle) {
  // dB is piecewise linear between 10 GHz samples with its kink on a sample, so the crossings are exact.
  const auto s = spectrum_db(200e9, 400e9, 10e9, [](double g) { return -18.0 + 0.09 * std::abs(g - 300.0); });
  const auto r = impedance_bandwidth(s);
  ASSERT_EQ(r.bands.size(), 1u);
  const double lo = (300.0 - 8.0 / 0.09) * 1e9, hi = (300.0 + 8.0 / 0.09) * 1e9;
  EXPECT_LT(std::abs(r.bands[0].lo_hz - lo) / lo, 1e-9);
  EXPECT_LT(std::abs(r.bands[0].hi_hz - hi) / hi, 1e-9);
}

TEST(ImpedanceBandwidth, InterpolationOracleOnRandomSegments) {
  std::vector<double> db{-4.0, -12.0, -6.0, -20.0, -25.0, -9.5, -10.5, -2.0};
  SpectrumResult s;
  for (std::size_t i = 0; i < db.size(); ++i) {
    s.frequencies.push_back(200e9 + 25e9 * double(i));
    s.s11.push_back(from_db(db[i]));
  }
  const auto r = impedance_bandwidth(s);
  ASSERT_EQ(r.bands.size(), 3u);
  auto x = [&](std::size_t i) {  // crossing between samples i and i+1 solved as a line through both
    const double slope = (db[i + 1] - db[i]) / 25e9;
    return s.frequencies[i] + (-10.0 - db[i]) / slope;
  };
  EXPECT_LT(std::abs(r.bands[0].lo_hz - x(0)) / x(0), 1e-9);
  EXPECT_LT(std::abs(r.bands[0].hi_hz - x(1)) / x(1), 1e-9);
  EXPECT_LT(std::abs(r.bands[1].lo_hz - x(2)) / x(2), 1e-9);
  EXPECT_LT(std::abs(r.bands[1].hi_hz - x(4)) / x(4), 1e-9);
  EXPECT_LT(std::abs(r.bands[2].lo_hz - x(5)) / x(5), 1e-9);
  EXPECT_LT(std::abs(r.bands[2].hi_hz - x(6)) / x(6), 1e-9);
  EXPECT_EQ(r.widest, 1);
}

TEST(ImpedanceBandwidth, BandTouchingSweepEdgesUsesEndpoints) {
  const auto s = spectrum_db(200e9, 400e9, 10e9, [](double g) { return g < 260.0 || g > 380.0 ? -20.0 : -5.0; });
  const auto r = impedance_bandwidth(s);
  ASSERT_EQ(r.bands.size(), 2u);
  EXPECT_EQ(r.bands[0].lo_hz, 200e9);
  EXPECT_EQ(r.bands[1].hi_hz, 400e9);
  for (const auto& b : r.bands) {
    EXPECT_GE(b.lo_hz, 200e9);
    EXPECT_LE(b.hi_hz, 400e9);
  }
}

TEST(SpectrumResult, ValidationRejectsInconsistentData) {
  SpectrumResult s;
  s.frequencies = {1.0, 2.0};
  s.s11 = {0.1};
  EXPECT_THROW(s.validate(), DomainError);
  s.s11 = {0.1, 0.2};
  s.efficiency = {0.1};
  EXPECT_THROW(s.validate(), DomainError);
  s.efficiency.clear();
  s.frequencies = {2.0, 1.0};
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(StageReport, FixtureMatchesGoldenTable) {
  const auto rep = stage_report(pipeline::table_fixture());
  EXPECT_FALSE(rep.trend_violation);
  EXPECT_EQ(rep.text, read_file(std::string(AOCSIM_GOLDEN_DIR) + "/table1.txt"));
}

TEST(StageReport, SingleStage) {
  const auto rep = stage_report({{4, {7.0, 0.24, 0.42, 114}}});
  EXPECT_FALSE(rep.trend_violation);
  EXPECT_EQ(rep.text,
            "Design          | Stage 4\n"
            "Peak Dir. [dB]  | 7.0\n"
            "L x W [mm]      | 0.24*0.42\n"
            "Bandwidth [GHz] | 114\n");
  EXPECT_THROW(stage_report({}), DomainError);
}

TEST(StageReport, FlatTrendIsFlagged) {
  const auto rep = stage_report({{1, {4.7, 0.3, 0.6, 50}}, {2, {7.2, 0.3, 0.6, 50}}, {3, {7.0, 0.24, 0.42, 92}}});
  EXPECT_TRUE(rep.trend_violation);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_NE(rep.text.find("!! TREND VIOLATION: bandwidth does not increase from stage 1"), std::string::npos);
}

TEST(SummarizeStage, BandwidthAndCarrierDirectivity) {
  auto s = spectrum_db(200e9, 400e9, 10e9, [](double g) { return g >= 250.0 && g <= 330.0 ? -20.0 : -2.0; });
  for (double f : s.frequencies) s.peak_directivity_dbi.push_back(f == 290e9 ? 6.5 : 1.0);
  const auto m = summarize_stage(s, 0.24, 0.42);
  EXPECT_EQ(m.peak_directivity_db, 6.5);
  EXPECT_NEAR(m.bandwidth_ghz, 80.0 + 2 * 10.0 * (10.0 / 18.0), 1e-9);
}

TEST(EfficiencyPeak, ParabolaVertexOracle) {
  SpectrumResult s;
  for (int i = 0; i < 20; ++i) {
    const double f = 205e9 + 10e9 * i;
    s.frequencies.push_back(f);
    s.s11.push_back(0.1);
    const double x = (f - 275e9) / 1e9;
    s.efficiency.push_back(0.42 - 2e-5 * x * x);
  }
  const auto p = efficiency_peak(s);
  EXPECT_FALSE(p.edge);
  EXPECT_FALSE(p.plateau);
  EXPECT_TRUE(p.decreases_after);
  EXPECT_NEAR(p.frequency_hz / 1e9, 275.0, 1e-9);
  EXPECT_NEAR(p.value, 0.42, 1e-9);
}

TEST(EfficiencyPeak, EdgeAndPlateauAreFlagged) {
  SpectrumResult s;
  for (int i = 0; i <= 20; ++i) {
    s.frequencies.push_back(200e9 + 10e9 * i);
    s.s11.push_back(0.1);
    s.efficiency.push_back(0.2 + 0.01 * i);
  }
  auto p = efficiency_peak(s);
  EXPECT_TRUE(p.edge);
  EXPECT_FALSE(p.decreases_after);
  EXPECT_EQ(p.frequency_hz, 400e9);
  s.efficiency[8] = s.efficiency[9] = 0.9;
  p = efficiency_peak(s);
  EXPECT_TRUE(p.plateau);
  EXPECT_EQ(p.frequency_hz, 280e9);
  s.efficiency.resize(5);
  s.frequencies.resize(5);
  s.s11.resize(5);
  EXPECT_THROW(efficiency_peak(s), DomainError);
}

TEST(ParabolaVertex, KnownVertexAndCollinearError) {
  auto y = [](double x) { return 3.0 - 0.5 * (x - 1.25) * (x - 1.25); };
  const auto [xv, yv] = parabola_vertex(0.0, y(0.0), 1.0, y(1.0), 3.0, y(3.0));
  EXPECT_NEAR(xv, 1.25, 1e-12);
  EXPECT_NEAR(yv, 3.0, 1e-12);
  EXPECT_THROW(parabola_vertex(0, 0, 1, 1, 2, 2), DomainError);
}

TEST(Smith, ExportAndSignChanges) {
  SpectrumResult s;
  const std::vector<double> im{0.2, 0.1, -0.1, 0.0, -0.3, 0.4};
  for (std::size_t i = 0; i < im.size(); ++i) {
    s.frequencies.push_back(200e9 + 1e9 * double(i));
    s.s11.emplace_back(0.1 * double(i), im[i]);
  }
  const auto pts = smith_export(s);
  ASSERT_EQ(pts.size(), im.size());
  EXPECT_EQ(pts[2].frequency_hz, 202e9);
  EXPECT_EQ(pts[2].re, 0.2);
  EXPECT_EQ(pts[2].im, -0.1);
  EXPECT_EQ(imag_sign_changes(pts), 2);
}
