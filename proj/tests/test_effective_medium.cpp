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
#include <limits>
#include <random>

#include "aocsim/constants.hpp"
#include "aocsim/effective_medium.hpp"
#include "aocsim/error.hpp"

using namespace aocsim;
using em::cdouble;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

// Reference values below were evaluated once with 40-digit mpmath from the
// closed forms and frozen here.
constexpr double kTm30 = 178.2706404011706;
constexpr double kZadlIm = -1973.9816353249416;
const cdouble kArg(0.99692811772524107, 7.8594514844339477e-5);
const cdouble kKeff(78408.656149477921, -1003.3980354066708);
const cdouble kEps(166.39587919400536, -4.2594441280894667);

struct CurvePoint {
  double ghz, k, eps;
};
constexpr CurvePoint kCurve[] = {
    {200, 25010.550556348326, 35.60149058827387},  {250, 31263.544810883265, 35.602302796794785},
    {290, 36266.109137516905, 35.60308258445591},  {350, 43770.294287299266, 35.604469036882169},
    {400, 50024.144738325092, 35.605823196047926},
};

}  // namespace

TEST(ModeImpedance, VacuumBroadsideEqualsEta0) {
  const em::HostMedium vac{1.0, 0.0};
  const auto ctx = em::make_context(290e9, 0.0, vac);
  EXPECT_NEAR(std::abs(em::mode_impedance(em::ModeKind::te, ctx, vac) - constants::eta0), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(em::mode_impedance(em::ModeKind::tm, ctx, vac) - constants::eta0), 0.0, 1e-9);
  EXPECT_NEAR(constants::eta0, 376.73, 0.01);
}

TEST(ModeImpedance, TmObliqueMatchesRefractedAngleOracle) {
  const em::HostMedium host{4.2, 0.0};
  const auto ctx = em::make_context(290e9, constants::pi / 6, host, em::KRhoConvention::conventional);
  const cdouble z = em::mode_impedance(em::ModeKind::tm, ctx, host);
  EXPECT_LT(rel(z, cdouble(kTm30, 0.0)), 1e-12);
}

TEST(ModeImpedance, TeAtGrazingKzIsSingular) {
  const em::HostMedium vac{1.0, 0.0};
  auto ctx = em::make_context(290e9, 0.0, vac);
  ctx.kz = 0.0;
  EXPECT_THROW(em::mode_impedance(em::ModeKind::te, ctx, vac), SingularityError);
}

TEST(ModeImpedance, LiteralAndConventionalAgreeAtBroadside) {
  const em::HostMedium host{4.2, 3.0};
  const auto a = em::make_context(300e9, 0.0, host, em::KRhoConvention::paper_literal);
  const auto b = em::make_context(300e9, 0.0, host, em::KRhoConvention::conventional);
  EXPECT_LT(rel(a.kz, b.kz), 1e-15);
  EXPECT_EQ(std::abs(a.k_rho), 0.0);
  EXPECT_DOUBLE_EQ(a.k0, 2.0 * constants::pi * 300e9 / constants::c0);
}

TEST(AdlSheet, MatchesClosedFormOracle) {
  em::AdlStack s;
  const auto ctx = em::make_context(290e9, 0.0, s.host);
  const cdouble z = em::adl_sheet_impedance(s, em::ModeKind::te, ctx);
  EXPECT_LT(rel(z, cdouble(0.0, kZadlIm)), 1e-12);
}

TEST(AdlSheet, VanishingPatchesAreTransparent) {
  em::AdlStack s;
  double prev = 0.0;
  for (double g : {2e-6, 5e-6, 9e-6, 9.9e-6, 9.999e-6}) {
    s.patch_gap = g;
    const auto ctx = em::make_context(290e9, 0.0, s.host);
    const double mag = std::abs(em::adl_sheet_impedance(s, em::ModeKind::te, ctx));
    EXPECT_GT(mag, prev);
    prev = mag;
  }
  EXPECT_GT(prev, 1e6);
}

TEST(AdlSheet, RejectsInvalidGap) {
  em::AdlStack s;
  const auto ctx = em::make_context(290e9, 0.0, s.host);
  s.patch_gap = s.patch_period;
  EXPECT_THROW(em::adl_sheet_impedance(s, em::ModeKind::te, ctx), DomainError);
  s.patch_gap = 0.0;
  EXPECT_THROW(em::adl_sheet_impedance(s, em::ModeKind::te, ctx), DomainError);
}

TEST(AdlSheet, CapacitiveOverRandomDomain) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    em::AdlStack s;
    s.host = {1.0 + 11.0 * U(rng), 30.0 * U(rng)};
    s.patch_period = 1e-6 + 50e-6 * U(rng);
    s.patch_gap = s.patch_period * (1e-3 + 0.998 * U(rng));
    const auto conv = i % 2 ? em::KRhoConvention::conventional : em::KRhoConvention::paper_literal;
    const auto ctx = em::make_context(20e9 + 600e9 * U(rng), 1.5 * U(rng), s.host, conv);
    for (auto m : {em::ModeKind::te, em::ModeKind::tm})
      EXPECT_LT(em::adl_sheet_impedance(s, m, ctx).imag(), 0.0);
  }
}

TEST(EffectiveWavenumber, NoLayerReturnsKz) {
  const cdouble kz(2.0e5, -1.5e3);
  const cdouble k = em::effective_wavenumber(kz, 1e-6, 300.0, cdouble(kInf, 0.0));
  EXPECT_LT(rel(k, kz), 1e-12);
}

TEST(EffectiveWavenumber, ZeroKzGivesZero) {
  const cdouble k = em::effective_wavenumber(0.0, 1e-6, cdouble(120.0, 3.0), cdouble(0.0, -900.0));
  EXPECT_EQ(std::abs(k), 0.0);
}

TEST(EffectiveWavenumber, DerivedExampleMatchesOracle) {
  const cdouble kz(1.2e4, -3e2);
  const cdouble z_mode(0.0, 0.5), z_adl(1.0, 0.0);  // ratio j*0.5
  const cdouble arg = em::dispersion_argument(kz, 1e-6, z_mode, z_adl);
  EXPECT_LT(rel(arg, kArg), 1e-12);
  const cdouble k = em::effective_wavenumber(kz, 1e-6, z_mode, z_adl);
  EXPECT_LT(rel(k, kKeff), 1e-10);
  EXPECT_LE(k.imag(), 0.0);
  EXPECT_LT(std::abs(std::cos(k * 1e-6) - arg) / std::abs(arg), 1e-12);
}

TEST(EffectiveWavenumber, NonFiniteArgumentThrows) {
  EXPECT_THROW(em::effective_wavenumber(cdouble(1e4, 0.0), 1e-6, cdouble(kInf, 0.0), 1.0), PropagationError);
}

TEST(EffectivePermittivity, TrivialCases) {
  const double k0 = 6000.0;
  EXPECT_LT(std::abs(em::effective_permittivity(k0, 0.0, k0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(em::effective_permittivity(2.0 * k0, 0.0, k0) - 4.0), 1e-15);
}

TEST(EffectivePermittivity, OracleChain) {
  const double k0 = 2.0 * constants::pi * 290e9 / constants::c0;
  const cdouble k = em::effective_wavenumber(cdouble(1.2e4, -3e2), 1e-6, cdouble(0.0, 0.5), 1.0);
  EXPECT_LT(rel(em::effective_permittivity(k, 0.0, k0), kEps), 1e-10);
}

TEST(Homogenize, NoDummyFillGivesHostPermittivity) {
  em::AdlStack s;
  s.layer_count = 0;
  s.host = {4.2, 2.0};
  std::vector<double> f;
  for (int i = 0; i <= 20; ++i) f.push_back(200e9 + 10e9 * i);
  const auto r = em::homogenize_dummy_stack(s, f, 0.0);
  for (const auto& p : r.points) {
    const cdouble host = em::complex_permittivity(s.host, p.frequency_hz);
    EXPECT_LT(rel(p.te.eps_eff, host), 1e-12);
    EXPECT_LT(rel(p.tm.eps_eff, host), 1e-12);
  }
}

TEST(Homogenize, PassiveAndContinuousOverSweep) {
  em::AdlStack s;
  s.host = {4.2, 5.0};
  std::vector<double> f;
  for (int i = 0; i <= 200; ++i) f.push_back(200e9 + 1e9 * i);
  for (double theta : {0.0, 0.4, 1.0}) {
    const auto r = em::homogenize_dummy_stack(s, f, theta);
    EXPECT_TRUE(r.discontinuities.empty());
    for (const auto& p : r.points) {
      EXPECT_LE(p.te.eps_eff.imag(), 1e-12);
      EXPECT_LE(p.tm.eps_eff.imag(), 1e-12);
      EXPECT_LE(p.te.k_eff.imag(), 0.0);
    }
    for (std::size_t i = 1; i < r.points.size(); ++i)
      EXPECT_LT(std::abs(r.points[i].te.k_eff - r.points[i - 1].te.k_eff), constants::pi / s.layer_period_dz);
  }
}

TEST(Homogenize, DefaultStackCurveRegression) {
  em::AdlStack s;
  std::vector<double> f;
  for (const auto& c : kCurve) f.push_back(c.ghz * 1e9);
  const auto r = em::homogenize_dummy_stack(s, f, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_LT(rel(r.points[i].te.k_eff, cdouble(kCurve[i].k, 0.0)), 1e-11) << f[i];
    EXPECT_LT(rel(r.points[i].te.eps_eff, cdouble(kCurve[i].eps, 0.0)), 1e-11) << f[i];
  }
  const auto ex = em::export_for_solver(s, 290e9);
  EXPECT_NEAR(ex.relative_permittivity, kCurve[2].eps, 1e-9);
  EXPECT_EQ(ex.conductivity, 0.0);
}

TEST(Homogenize, RejectsBadSweeps) {
  em::AdlStack s;
  EXPECT_THROW(em::homogenize_dummy_stack(s, std::vector<double>{}, 0.0), Error);
  EXPECT_THROW(em::homogenize_dummy_stack(s, std::vector<double>{300e9, 200e9}, 0.0), Error);
}

TEST(Homogenize, FailureNamesFrequency) {
  em::AdlStack s;
  try {
    em::homogenize_dummy_stack(s, std::vector<double>{200e9, -1.0}, 0.0);
    FAIL();
  } catch (const Error& e) {
    SUCCEED() << e.what();
  }
}

TEST(HostMedium, Validation) {
  EXPECT_THROW((em::HostMedium{0.5, 0.0}.validate()), DomainError);
  EXPECT_THROW((em::HostMedium{2.0, -1.0}.validate()), DomainError);
  EXPECT_NO_THROW((em::HostMedium{11.9, 10.0}.validate()));
}
