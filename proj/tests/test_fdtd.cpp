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

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"
#include "aocsim/fdtd.hpp"
#include "aocsim/sparams.hpp"
#include "aocsim/validation.hpp"

using namespace aocsim;
using namespace aocsim::fdtd;

namespace {

constexpr double kCell = 5e-6;

SolverOptions pec_box() {
  SolverOptions o;
  o.boundaries = Boundaries::all(BoundaryKind::pec);
  return o;
}

SolverOptions open_box(int cells) {
  SolverOptions o;
  o.cpml.cells = cells;
  return o;
}

GaussianPulse pulse(double amplitude) {
  GaussianPulse p;
  p.amplitude = amplitude;
  return p;
}

long steps_for(const GaussianPulse& p, double dt, double extra) { return long(std::ceil(p.end_time() * extra / dt)); }

// Small wire loop closed by a lumped element: port edge, two PEC rungs and a load edge.
struct Loop {
  FdtdSolver solver;
  int port;
  explicit Loop(double load_ohms) : solver(geom::VoxelGrid::uniform({12, 12, 12}, 0.5e-6), pec_box()) {
    PortSpec spec;
    spec.axis = Component::ez;
    spec.gaps = {{1, {{6, 6, 5}}}};
    if (load_ohms > 0.0) {
      solver.add_resistor(Component::ez, 7, 6, 5, load_ohms);
      solver.set_pec_edge(Component::ex, 6, 6, 5);
      solver.set_pec_edge(Component::ex, 6, 6, 6);
    }
    port = solver.add_port(spec);
  }
  std::vector<std::complex<double>> s11(const std::vector<double>& f) {
    const long n = steps_for(GaussianPulse{}, solver.dt(), 1.3);
    for (long s = 0; s < n; ++s) solver.step();
    PortRecord rec;
    rec.dt = solver.dt();
    rec.time_offset = 0.5 * solver.dt();
    rec.voltage = solver.port(port).voltage;
    rec.current = solver.port(port).current;
    rec.source = solver.port(port).source;
    return sparams::extract_s11(rec, f);
  }
};

const std::vector<double> kBand{200e9, 250e9, 290e9, 350e9, 400e9};

}  // namespace

TEST(GaussianPulse, HalfPowerBandCoversSweep) {
  const GaussianPulse p;
  auto spectrum = [&](double f) {
    const double a = constants::pi * (f - p.center_hz) * p.tau();
    return std::exp(-a * a);
  };
  EXPECT_NEAR(spectrum(p.center_hz + p.halfwidth_hz), std::sqrt(0.5), 1e-12);
  EXPECT_GT(spectrum(200e9), std::sqrt(0.5));
  EXPECT_GT(spectrum(400e9), std::sqrt(0.5));
  EXPECT_LT(std::abs(p(0.0)), 1e-4);
  EXPECT_LT(std::abs(p(p.end_time())), 1e-4);
}

TEST(SimulationConfig, TimeStepAndValidation) {
  SimulationConfig c;
  EXPECT_NEAR(c.dt(kCell), 0.99 * kCell / (constants::c0 * std::sqrt(3.0)), 1e-25);
  c.dft_frequencies = kBand;
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.dft_frequencies = {600e9};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.time_steps = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.cfl = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(FdtdSolver, ZeroSourceKeepsFieldsZero) {
  FdtdSolver s(geom::VoxelGrid::uniform({16, 16, 16}, kCell), open_box(4));
  s.add_current_source(Component::ez, 8, 8, 8, pulse(0.0));
  for (int n = 0; n < 400; ++n) {
    double e = -1.0;
    s.step(&e);
    EXPECT_EQ(e, 0.0);
  }
  for (int c = 0; c < 6; ++c)
    for (int k = 0; k < 16; ++k)
      for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) ASSERT_EQ(s.field(Component(c), i, j, k), 0.0f);
}

TEST(FdtdSolver, LinearInSourceAmplitude) {
  // Scaling by a power of two is exact in binary floating point.
  FdtdSolver a(geom::VoxelGrid::uniform({18, 18, 18}, kCell), open_box(4));
  FdtdSolver b(geom::VoxelGrid::uniform({18, 18, 18}, kCell), open_box(4));
  a.add_current_source(Component::ez, 9, 9, 9, pulse(1.0));
  b.add_current_source(Component::ez, 9, 9, 9, pulse(4.0));
  const int pa = a.add_probe(Component::ez, 12, 9, 9), pb = b.add_probe(Component::ez, 12, 9, 9);
  for (int n = 0; n < 600; ++n) {
    a.step();
    b.step();
  }
  for (int c = 0; c < 6; ++c)
    for (int k = 0; k < 18; ++k)
      for (int j = 0; j < 18; ++j)
        for (int i = 0; i < 18; ++i)
          ASSERT_EQ(4.0f * a.field(Component(c), i, j, k), b.field(Component(c), i, j, k));
  double peak = 0.0;
  for (std::size_t n = 0; n < a.probe(pa).size(); ++n) {
    EXPECT_EQ(4.0 * a.probe(pa)[n], b.probe(pb)[n]);
    peak = std::max(peak, std::abs(a.probe(pa)[n]));
  }
  EXPECT_GT(peak, 0.0);
}

TEST(FdtdSolver, PartitionCountDoesNotChangeFields) {
  auto make = [](int threads) {
    auto o = open_box(4);
    o.threads = threads;
    auto s = std::make_unique<FdtdSolver>(geom::VoxelGrid::uniform({14, 14, 20}, kCell), o);
    s->add_current_source(Component::ex, 7, 7, 10, GaussianPulse{});
    for (int n = 0; n < 300; ++n) s->step();
    return s;
  };
  const auto one = make(1), three = make(3);
  for (int c = 0; c < 6; ++c)
    for (int k = 0; k < 20; ++k)
      for (int j = 0; j < 14; ++j)
        for (int i = 0; i < 14; ++i)
          ASSERT_EQ(one->field(Component(c), i, j, k), three->field(Component(c), i, j, k));
}

TEST(FdtdSolver, LosslessCavityConservesEnergy) {
  validation::ValidationOptions o;
  const auto r = validation::cavity_energy(o, 5000);
  EXPECT_EQ(r.steps, 5000);
  EXPECT_GT(r.mean_energy, 0.0);
  EXPECT_LT(r.drift, 5e-3);
}

TEST(FdtdSolver, LossyCavityEnergyStrictlyDecreases) {
  geom::VoxelGrid g = geom::VoxelGrid::uniform({16, 16, 16}, kCell, {"lossy", 2.0, 1.0});
  FdtdSolver s(g, pec_box());
  const GaussianPulse p;
  s.add_current_source(Component::ez, 5, 6, 7, p);
  const long warm = steps_for(p, s.dt(), 1.0);
  for (long n = 0; n < warm; ++n) s.step();
  double prev = 0.0;
  s.step(&prev);
  ASSERT_GT(prev, 0.0);
  for (int n = 0; n < 2000; ++n) {
    double e = 0.0;
    s.step(&e);
    ASSERT_LT(e, prev) << "step " << n;
    prev = e;
  }
}

TEST(FdtdSolver, CflAboveOneIsDetected) {
  validation::ValidationOptions o;
  o.cfl = 1.2;
  EXPECT_THROW(validation::cavity_energy(o, 5000), NumericalInstability);
  const auto item = validation::cavity_item(o);
  EXPECT_FALSE(item.passed);
  EXPECT_NE(item.detail.find("instability"), std::string::npos);
}

TEST(FdtdSolver, AbsorberQualityAndMissingAbsorber) {
  validation::ValidationOptions o;
  const auto good = validation::absorber_item(o);
  EXPECT_TRUE(good.passed) << good.detail;
  EXPECT_LT(good.measured, -40.0);
  o.absorber.cells = 0;
  const auto bad = validation::absorber_item(o);
  EXPECT_FALSE(bad.passed);
  EXPECT_GT(bad.measured, -40.0);
}

TEST(FdtdSolver, RejectsInvalidSetup) {
  auto o = open_box(10);
  EXPECT_THROW(FdtdSolver(geom::VoxelGrid::uniform({16, 40, 40}, kCell), o), ConfigError);
  FdtdSolver s(geom::VoxelGrid::uniform({16, 16, 16}, kCell), pec_box());
  EXPECT_THROW(s.add_resistor(Component::hx, 1, 1, 1, 50.0), ConfigError);
  EXPECT_THROW(s.add_resistor(Component::ex, 1, 1, 1, 0.0), ConfigError);
  s.set_pec_edge(Component::ex, 3, 3, 3);
  EXPECT_THROW(s.add_current_source(Component::ex, 3, 3, 3, GaussianPulse{}), ConfigError);
  EXPECT_THROW(s.add_port(PortSpec{}), ConfigError);
  EXPECT_THROW(s.add_surface_dft({0, 0, 0}, {16, 16, 16}, kBand, 1), ConfigError);
}

TEST(LumpedPort, MatchedLoadHasNoReflection) {
  Loop loop(50.0);
  const auto s = loop.s11(kBand);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_LT(20.0 * std::log10(std::abs(s[i])), -30.0) << kBand[i];
}

TEST(LumpedPort, OpenPortReflectsFully) {
  Loop loop(0.0);
  const auto s = loop.s11(kBand);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s[i].real(), 1.0, 0.02) << kBand[i];
    EXPECT_LT(std::abs(s[i]), 1.0 + 1e-6);
  }
}

TEST(LumpedPort, S11IsAmplitudeInvariant) {
  // Ten air cells separate the absorber from the reactive near field of the source.
  auto run = [](double amp) {
    FdtdSolver s(geom::VoxelGrid::uniform({30, 30, 30}, kCell), open_box(10));
    PortSpec spec;
    spec.axis = Component::ez;
    spec.gaps = {{1, {{15, 15, 14}, {15, 15, 15}}}};
    spec.waveform.amplitude = amp;
    const int id = s.add_port(spec);
    for (int n = 0; n < 6000; ++n) s.step();
    PortRecord rec{s.dt(), 0.5 * s.dt(), 50.0, s.port(id).voltage, s.port(id).current, s.port(id).source};
    return sparams::extract_s11(rec, kBand);
  };
  const auto a = run(1.0), b = run(0.37);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LT(std::abs(a[i] - b[i]), 1e-5);
    EXPECT_LT(std::abs(a[i]), 1.0 + 1e-6) << std::abs(a[i]) - 1.0;
  }
}
