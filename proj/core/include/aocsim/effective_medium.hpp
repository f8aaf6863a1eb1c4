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

// Homogenization of periodic dummy-metal fill (an artificial dielectric
// layer, ADL) into an equivalent uniform medium.
//
// Time convention is exp(+j*omega*t): lossy permittivities have a negative
// imaginary part and decaying waves have Im(k) < 0.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aocsim::em {

using cdouble = std::complex<double>;

struct HostMedium {
  double relative_permittivity = 1.0;
  double conductivity = 0.0;  // S/m

  void validate() const;
};

// eps_r - j*sigma/(omega*eps0)
cdouble complex_permittivity(const HostMedium& host, double frequency_hz);

struct AdlStack {
  double layer_period_dz = 1e-6;  // vertical spacing of dummy layers
  double patch_period = 10e-6;    // in-plane period of the dummy squares
  double patch_gap = 2e-6;        // spacing between neighbouring squares
  int layer_count = 8;            // 0 means "no dummy fill"
  HostMedium host{4.2, 0.0};

  double thickness() const { return layer_period_dz * layer_count; }
  void validate() const;
};

enum class ModeKind { te, tm };

std::string to_string(ModeKind mode);

// How the transverse wavenumber is tied to the incidence angle.
//  paper_literal: theta is the propagation angle in the host,
//                 kz = k_h*cos(theta) and k_rho = kz*sin(theta).
//  conventional:  theta is the incidence angle from free space,
//                 k_rho = k0*sin(theta) and kz = sqrt(k_h^2 - k_rho^2).
// Both agree at broadside.
enum class KRhoConvention { paper_literal, conventional };

struct PlaneWaveContext {
  double frequency_hz = 0.0;
  double theta = 0.0;
  double k0 = 0.0;
  cdouble kh;     // host wavenumber
  cdouble kz;     // longitudinal wavenumber in the host
  cdouble k_rho;  // transverse spectral wavenumber
};

PlaneWaveContext make_context(double frequency_hz, double theta, const HostMedium& host,
                              KRhoConvention convention = KRhoConvention::paper_literal);

/// Plane-wave TE/TM line impedance of the host: eta_h*k_h/k_z (TE) or
/// eta_h*k_z/k_h (TM). Throws SingularityError for TE at k_z = 0.
cdouble mode_impedance(ModeKind mode, const PlaneWaveContext& ctx, const HostMedium& host);

/// Grid parameter alpha = (k_h p / pi) ln(1 / sin(pi w / 2p)).
cdouble grid_parameter(const AdlStack& stack, const PlaneWaveContext& ctx);

/// Capacitive sheet impedance of one layer of square patches (averaged
/// boundary conditions). TM carries the 1/(1 - k_rho^2 / 2k_h^2) factor.
cdouble adl_sheet_impedance(const AdlStack& stack, ModeKind mode, const PlaneWaveContext& ctx);

/// Right-hand side of the dispersion relation, cos(k_eff*dz).
cdouble dispersion_argument(cdouble kz, double dz, cdouble z_mode, cdouble z_adl);

/// Bloch wavenumber of the loaded periodic line. z_adl may be infinite
/// (no dummy layer). The branch is chosen with Im(k_eff) <= 0 and, when a
/// previous sweep value is supplied, the Re part closest to it.
cdouble effective_wavenumber(cdouble kz, double dz, cdouble z_mode, cdouble z_adl,
                             std::optional<cdouble> previous = std::nullopt);

/// (k_eff^2 + k_rho^2) / k0^2
cdouble effective_permittivity(cdouble k_eff, cdouble k_rho, double k0);

struct ModeResult {
  cdouble k_eff;
  cdouble eps_eff;
};

struct EffectiveMedium {
  double frequency_hz = 0.0;
  ModeResult te;
  ModeResult tm;

  const ModeResult& mode(ModeKind m) const { return m == ModeKind::te ? te : tm; }
};

struct Discontinuity {
  std::size_t index;  // between index-1 and index
  ModeKind mode;
  double jump;        // |k_eff(i) - k_eff(i-1)| in rad/m
};

struct HomogenizationResult {
  std::vector<EffectiveMedium> points;
  std::vector<Discontinuity> discontinuities;
};

HomogenizationResult homogenize_dummy_stack(const AdlStack& stack, std::span<const double> frequencies_hz,
                                            double theta,
                                            KRhoConvention convention = KRhoConvention::paper_literal);

// Scalar material handed to the time-domain solver: broadside TE value at a
// single frequency, with the loss folded into an equivalent conductivity.
struct ExportedMedium {
  double relative_permittivity;
  double conductivity;
  cdouble eps_eff;
};

ExportedMedium export_for_solver(const AdlStack& stack, double frequency_hz);

}  // namespace aocsim::em
