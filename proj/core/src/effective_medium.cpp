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
#include "aocsim/effective_medium.hpp"

#include <cmath>
#include <sstream>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"

namespace aocsim::em {

namespace {

constexpr cdouble j{0.0, 1.0};

bool finite(cdouble z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Principal square root with the sign flipped, if needed, so Im <= 0.
cdouble decaying_sqrt(cdouble z) {
  cdouble r = std::sqrt(z);
  if (r.imag() > 0.0) r = -r;
  return r;
}

}  // namespace

void HostMedium::validate() const {
  if (!std::isfinite(relative_permittivity) || relative_permittivity < 1.0)
    throw DomainError("host relative permittivity must be finite and >= 1");
  if (!std::isfinite(conductivity) || conductivity < 0.0)
    throw DomainError("host conductivity must be finite and non-negative");
}

cdouble complex_permittivity(const HostMedium& host, double frequency_hz) {
  const double omega = 2.0 * constants::pi * frequency_hz;
  return {host.relative_permittivity, -host.conductivity / (omega * constants::eps0)};
}

void AdlStack::validate() const {
  if (!(layer_period_dz > 0.0)) throw DomainError("ADL layer period d_z must be positive");
  if (!(patch_period > 0.0)) throw DomainError("ADL patch period must be positive");
  if (!(patch_gap > 0.0)) throw DomainError("ADL patch gap must be positive");
  if (patch_gap >= patch_period) throw DomainError("ADL patch gap must be smaller than the patch period");
  if (layer_count < 0) throw DomainError("ADL layer count must be non-negative");
  host.validate();
}

std::string to_string(ModeKind mode) { return mode == ModeKind::te ? "TE" : "TM"; }

PlaneWaveContext make_context(double frequency_hz, double theta, const HostMedium& host,
                              KRhoConvention convention) {
  if (!(frequency_hz > 0.0)) throw DomainError("frequency must be positive");
  if (!(theta >= 0.0 && theta < constants::pi / 2)) throw DomainError("theta must lie in [0, pi/2)");
  host.validate();

  PlaneWaveContext ctx;
  ctx.frequency_hz = frequency_hz;
  ctx.theta = theta;
  ctx.k0 = 2.0 * constants::pi * frequency_hz / constants::c0;
  ctx.kh = ctx.k0 * decaying_sqrt(complex_permittivity(host, frequency_hz));
  switch (convention) {
    case KRhoConvention::paper_literal:
      ctx.kz = ctx.kh * std::cos(theta);
      ctx.k_rho = ctx.kz * std::sin(theta);
      break;
    case KRhoConvention::conventional:
      ctx.k_rho = ctx.k0 * std::sin(theta);
      ctx.kz = decaying_sqrt(ctx.kh * ctx.kh - ctx.k_rho * ctx.k_rho);
      break;
  }
  return ctx;
}

cdouble mode_impedance(ModeKind mode, const PlaneWaveContext& ctx, const HostMedium& host) {
  host.validate();
  const cdouble eps = complex_permittivity(host, ctx.frequency_hz);
  const cdouble eta_h = constants::eta0 / decaying_sqrt(eps);
  if (mode == ModeKind::te) {
    if (ctx.kz == cdouble{0.0, 0.0})
      throw SingularityError("TE mode impedance is singular at k_z = 0 (grazing incidence)");
    return eta_h * ctx.kh / ctx.kz;
  }
  return eta_h * ctx.kz / ctx.kh;
}

cdouble grid_parameter(const AdlStack& stack, const PlaneWaveContext& ctx) {
  stack.validate();
  const double p = stack.patch_period;
  const double w = stack.patch_gap;
  const double log_term = std::log(1.0 / std::sin(constants::pi * w / (2.0 * p)));
  return ctx.kh * p / constants::pi * log_term;
}

cdouble adl_sheet_impedance(const AdlStack& stack, ModeKind mode, const PlaneWaveContext& ctx) {
  const cdouble alpha = grid_parameter(stack, ctx);
  const cdouble eta_h = constants::eta0 * ctx.k0 / ctx.kh;
  cdouble z = -j * eta_h / (2.0 * alpha);
  if (mode == ModeKind::tm) z /= 1.0 - ctx.k_rho * ctx.k_rho / (2.0 * ctx.kh * ctx.kh);
  return z;
}

cdouble dispersion_argument(cdouble kz, double dz, cdouble z_mode, cdouble z_adl) {
  const cdouble x = kz * dz;
  const cdouble ratio = std::isinf(std::abs(z_adl)) ? cdouble{} : z_mode / (2.0 * z_adl);
  return std::cos(x) + j * ratio * std::sin(x);
}

cdouble effective_wavenumber(cdouble kz, double dz, cdouble z_mode, cdouble z_adl,
                             std::optional<cdouble> previous) {
  if (!(dz > 0.0)) throw DomainError("layer period d_z must be positive");
  if (z_adl == cdouble{0.0, 0.0}) throw DomainError("ADL sheet impedance must be non-zero");

  const cdouble x = kz * dz;
  const cdouble ratio = std::isinf(std::abs(z_adl)) ? cdouble{} : z_mode / (2.0 * z_adl);
  const cdouble arg = std::cos(x) + j * ratio * std::sin(x);
  if (!finite(arg)) throw PropagationError("arccos argument of the dispersion relation is not finite");

  // arccos evaluated through half-angle forms so that arguments close to
  // +-1 keep full relative accuracy.
  const cdouble s = std::sin(x);
  const cdouble half_sin = std::sin(0.5 * x);
  const cdouble half_cos = std::cos(0.5 * x);
  cdouble w;
  if (arg.real() >= 0.0) {
    const cdouble one_minus = 2.0 * half_sin * half_sin - j * ratio * s;
    w = 2.0 * std::asin(std::sqrt(0.5 * one_minus));
  } else {
    const cdouble one_plus = 2.0 * half_cos * half_cos + j * ratio * s;
    w = constants::pi - 2.0 * std::asin(std::sqrt(0.5 * one_plus));
  }
  if (!finite(w)) throw PropagationError("arccos of the dispersion relation is not finite");

  const double two_pi = 2.0 * constants::pi;
  const double tiny = 1e-14 * std::max(1.0, std::abs(w));
  auto lattice_shift = [&](cdouble c, double target) {
    return c + two_pi * std::round((target - c.real()) / two_pi);
  };

  cdouble best;
  if (previous) {
    const cdouble phi_prev = *previous * dz;
    bool have = false;
    for (const cdouble cand : {w, -w}) {
      if (cand.imag() > tiny) continue;
      const cdouble shifted = lattice_shift(cand, phi_prev.real());
      if (!have || std::abs(shifted - phi_prev) < std::abs(best - phi_prev)) {
        best = shifted;
        have = true;
      }
    }
  } else {
    best = w.imag() > tiny ? -w : w;
    if (std::abs(best.imag()) <= tiny && best.real() < 0.0) best = -best;
    if (best.real() < 0.0) best += two_pi;
  }

  const cdouble check = std::cos(best);
  if (std::abs(check - arg) > 1e-12 * std::max(1.0, std::abs(arg)))
    throw PropagationError("forward substitution of the effective wavenumber failed");
  return best / dz;
}

cdouble effective_permittivity(cdouble k_eff, cdouble k_rho, double k0) {
  if (!(k0 > 0.0)) throw DomainError("free-space wavenumber must be positive");
  return (k_eff * k_eff + k_rho * k_rho) / (k0 * k0);
}

HomogenizationResult homogenize_dummy_stack(const AdlStack& stack, std::span<const double> frequencies_hz,
                                            double theta, KRhoConvention convention) {
  stack.validate();
  if (frequencies_hz.empty()) throw DomainError("frequency sweep is empty");
  for (std::size_t i = 1; i < frequencies_hz.size(); ++i)
    if (!(frequencies_hz[i] > frequencies_hz[i - 1]))
      throw DomainError("frequency sweep must be strictly increasing");

  HomogenizationResult result;
  result.points.reserve(frequencies_hz.size());
  const double dz = stack.layer_period_dz;
  std::optional<cdouble> prev_te, prev_tm;

  for (std::size_t i = 0; i < frequencies_hz.size(); ++i) {
    const double f = frequencies_hz[i];
    EffectiveMedium point;
    point.frequency_hz = f;
    try {
      const PlaneWaveContext ctx = make_context(f, theta, stack.host, convention);
      for (ModeKind mode : {ModeKind::te, ModeKind::tm}) {
        auto& prev = mode == ModeKind::te ? prev_te : prev_tm;
        ModeResult r;
        if (stack.layer_count == 0) {
          r.k_eff = ctx.kz;
        } else {
          const cdouble z_mode = mode_impedance(mode, ctx, stack.host);
          const cdouble z_adl = adl_sheet_impedance(stack, mode, ctx);
          r.k_eff = effective_wavenumber(ctx.kz, dz, z_mode, z_adl, prev);
        }
        r.eps_eff = effective_permittivity(r.k_eff, ctx.k_rho, ctx.k0);
        if (prev) {
          const double jump = std::abs(r.k_eff - *prev);
          if (jump > constants::pi / dz) result.discontinuities.push_back({i, mode, jump});
        }
        prev = r.k_eff;
        (mode == ModeKind::te ? point.te : point.tm) = r;
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "homogenization failed at " << f / 1e9 << " GHz: " << e.what();
      throw PropagationError(os.str());
    }
    result.points.push_back(point);
  }
  return result;
}

ExportedMedium export_for_solver(const AdlStack& stack, double frequency_hz) {
  const double f[] = {frequency_hz};
  const auto res = homogenize_dummy_stack(stack, f, 0.0);
  const cdouble eps = res.points.front().te.eps_eff;
  const double omega = 2.0 * constants::pi * frequency_hz;
  return {eps.real(), std::max(0.0, -eps.imag() * omega * constants::eps0), eps};
}

}  // namespace aocsim::em
