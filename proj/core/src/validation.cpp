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
#include "aocsim/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "aocsim/constants.hpp"
#include "aocsim/effective_medium.hpp"
#include "aocsim/error.hpp"
#include "aocsim/fdtd.hpp"
#include "aocsim/sparams.hpp"

namespace aocsim::validation {

using constants::c0;
using constants::eps0;
using constants::pi;
using cdouble = std::complex<double>;

bool ValidationReport::all_passed() const {
  return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.passed; });
}

std::string ValidationReport::format() const {
  std::ostringstream os;
  for (const auto& i : items) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-4s %-22s measured=%-12.6g", i.passed ? "PASS" : "FAIL", i.name.c_str(),
                  i.measured);
    os << buf << " [" << i.criterion << "]";
    if (!i.detail.empty()) os << " " << i.detail;
    std::snprintf(buf, sizeof buf, " (%.1f s)", i.seconds);
    os << buf << '\n';
  }
  os << (all_passed() ? "all validation items passed\n" : "validation FAILED\n");
  return os.str();
}

std::vector<double> band(const ValidationOptions& opts) {
  std::vector<double> f;
  const int n = int(std::lround((opts.f_max - opts.f_min) / opts.f_step));
  for (int i = 0; i <= n; ++i) f.push_back(opts.f_min + i * opts.f_step);
  return f;
}

// ------------------------------------------------------------------------

AdlIdentityResult adl_identities(unsigned seed, int samples) {
  AdlIdentityResult r;
  r.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    em::HostMedium host{1.0 + 11.0 * U(rng), 20.0 * U(rng)};
    const double f = 50e9 + 450e9 * U(rng);
    const double dz = 0.2e-6 + 2e-6 * U(rng);
    const double theta = 1.4 * U(rng);
    const auto conv = s % 2 ? em::KRhoConvention::conventional : em::KRhoConvention::paper_literal;
    const auto ctx = em::make_context(f, theta, host, conv);
    const auto mode = s % 3 ? em::ModeKind::te : em::ModeKind::tm;
    const cdouble zm = em::mode_impedance(mode, ctx, host);

    // No dummy layer: k_eff must equal k_z (k_z dz lies well inside (0, pi)).
    const cdouble k_free = em::effective_wavenumber(ctx.kz, dz, zm, cdouble(inf, 0.0));
    r.no_layer_k_error = std::max(r.no_layer_k_error, std::abs(k_free - ctx.kz) / std::abs(ctx.kz));
    if (conv == em::KRhoConvention::conventional) {
      const cdouble eps = em::effective_permittivity(k_free, ctx.k_rho, ctx.k0);
      const cdouble host_eps = em::complex_permittivity(host, f);
      r.no_layer_eps_error = std::max(r.no_layer_eps_error, std::abs(eps - host_eps) / std::abs(host_eps));
    }

    // Loaded line: cos(k_eff dz) must reproduce the dispersion argument.
    em::AdlStack stack;
    stack.host = host;
    stack.layer_period_dz = dz;
    stack.patch_period = 2e-6 + 20e-6 * U(rng);
    stack.patch_gap = stack.patch_period * (0.02 + 0.96 * U(rng));
    const cdouble za = em::adl_sheet_impedance(stack, mode, ctx);
    const cdouble arg = em::dispersion_argument(ctx.kz, dz, zm, za);
    const cdouble k = em::effective_wavenumber(ctx.kz, dz, zm, za);
    const cdouble back = std::cos(k * dz);
    r.forward_error = std::max(r.forward_error, std::abs(back - arg) / std::max(1.0, std::abs(arg)));
  }
  return r;
}

// ------------------------------------------------------------------------
// Columns: one cell in x and y with periodic walls, absorber on z.

namespace {

struct ColumnRun {
  std::vector<double> probe;
  double dt = 0.0;
};

fdtd::GaussianPulse band_pulse(const ValidationOptions& opts) {
  fdtd::GaussianPulse p;
  p.center_hz = 0.5 * (opts.f_min + opts.f_max);
  p.halfwidth_hz = 0.6 * (opts.f_max - opts.f_min);
  return p;
}

// Column of nz cells; cells below `k_interface` hold `lower`. Source and
// probe are Ex edges on node planes.
ColumnRun run_column(const ValidationOptions& opts, int nz, int k_interface, geom::Material lower, int k_source,
                     int k_probe, long steps) {
  auto grid = geom::VoxelGrid::uniform({1, 1, nz}, opts.cell_size);
  grid.materials.push_back(lower);
  for (int k = 0; k < k_interface; ++k) grid.cells[grid.index(0, 0, k)] = 1;
  fdtd::SolverOptions so;
  so.cfl = opts.cfl;
  so.cpml = opts.absorber;
  so.boundaries = fdtd::Boundaries::all(fdtd::BoundaryKind::cpml);
  so.boundaries.faces[0] = so.boundaries.faces[1] = fdtd::BoundaryKind::periodic;
  so.boundaries.faces[2] = so.boundaries.faces[3] = fdtd::BoundaryKind::periodic;
  fdtd::FdtdSolver s(grid, so);
  s.add_current_source(fdtd::Component::ex, 0, 0, k_source, band_pulse(opts));
  const int pid = s.add_probe(fdtd::Component::ex, 0, 0, k_probe);
  for (long n = 0; n < steps; ++n) s.step();
  return {s.probe(pid), s.dt()};
}

long column_steps(const ValidationOptions& opts, double travel_cells) {
  const double dt = opts.cfl * opts.cell_size / (c0 * std::sqrt(3.0));
  const double t = band_pulse(opts).end_time() + travel_cells * opts.cell_size / c0;
  return long(std::ceil(t / dt));
}

std::vector<double> difference(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace

ReflectionResult fresnel_column(const ValidationOptions& opts, double eps_r, double sigma) {
  const int np = opts.absorber.cells;
  const int n_lower = 200, gap_probe = 20, gap_source = 40, n_top = 20;
  const int nz = np + n_lower + gap_source + n_top + np;
  const int k_int = np + n_lower;
  const int k_probe = k_int + gap_probe, k_source = k_int + gap_source;
  // Long enough for the pulse to reach the interface and the reflection
  // to pass the probe.
  const long steps = column_steps(opts, 2.0 * (gap_source + gap_probe) + 200.0);
  const auto air = geom::Material{"air", 1.0, 0.0};
  const auto slab = run_column(opts, nz, k_int, {"silicon", eps_r, sigma}, k_source, k_probe, steps);
  const auto ref = run_column(opts, nz, k_int, air, k_source, k_probe, steps);
  ReflectionResult r;
  r.frequencies = band(opts);
  const auto inc = sparams::dft(ref.probe, ref.dt, 0.0, r.frequencies);
  const auto refl = sparams::dft(difference(slab.probe, ref.probe), ref.dt, 0.0, r.frequencies);
  for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
    r.measured.push_back(std::abs(refl[i] / inc[i]));
    const double w = 2.0 * pi * r.frequencies[i];
    const cdouble n = std::sqrt(cdouble(eps_r, -sigma / (w * eps0)));
    r.analytic.push_back(std::abs((1.0 - n) / (1.0 + n)));
  }
  return r;
}

ReflectionResult absorber_column(const ValidationOptions& opts) {
  const int np = opts.absorber.cells;
  const int gap_probe = 20, gap_source = 40, n_top = 20;
  const long steps = column_steps(opts, 2.0 * (gap_source + gap_probe) + 200.0);
  // The reference column is long enough that nothing returns from its far
  // end within the window.
  const double dt = opts.cfl * opts.cell_size / (c0 * std::sqrt(3.0));
  const int extra = int(std::ceil(steps * dt * c0 / opts.cell_size)) + 10;
  const auto air = geom::Material{"air", 1.0, 0.0};
  const int nz = np + gap_source + n_top + np;
  const auto test = run_column(opts, nz, 0, air, np + gap_source, np + gap_probe, steps);
  const int nz_ref = nz + extra;
  const auto ref = run_column(opts, nz_ref, 0, air, np + extra + gap_source, np + extra + gap_probe, steps);
  ReflectionResult r;
  r.frequencies = band(opts);
  const auto inc = sparams::dft(ref.probe, ref.dt, 0.0, r.frequencies);
  const auto refl = sparams::dft(difference(test.probe, ref.probe), ref.dt, 0.0, r.frequencies);
  for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
    r.measured.push_back(std::abs(refl[i] / inc[i]));
    r.analytic.push_back(0.0);
  }
  return r;
}

// ------------------------------------------------------------------------

CavityResult cavity_energy(const ValidationOptions& opts, long steps) {
  const int n = 24;
  auto grid = geom::VoxelGrid::uniform({n, n, n}, opts.cell_size);
  fdtd::SolverOptions so;
  so.cfl = opts.cfl;
  so.boundaries = fdtd::Boundaries::all(fdtd::BoundaryKind::pec);
  so.threads = opts.threads;
  fdtd::FdtdSolver s(grid, so);
  const auto pulse = band_pulse(opts);
  s.add_current_source(fdtd::Component::ez, 9, 11, 13, pulse);
  s.add_current_source(fdtd::Component::ex, 15, 7, 10, pulse);
  const long warmup = long(std::ceil(pulse.end_time() / s.dt())) + 1;
  double e = 0.0;
  auto check = [&](long step) {
    if (!std::isfinite(e) || e > 1e30)
      throw NumericalInstability("cavity energy diverged at step " + std::to_string(step) +
                                     "; the CFL factor must not exceed 1",
                                 step);
  };
  for (long i = 0; i < warmup; ++i) {
    s.step(&e);
    check(i);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
  for (long i = 0; i < steps; ++i) {
    s.step(&e);
    check(warmup + i);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    sum += e;
  }
  CavityResult r;
  r.steps = steps;
  r.mean_energy = sum / double(steps);
  r.drift = (hi - lo) / r.mean_energy;
  return r;
}

// ------------------------------------------------------------------------

namespace {

DipoleResult pattern_metrics(const ntff::FarFieldSolution& ff) {
  DipoleResult r;
  r.frequency_hz = ff.frequency_hz;
  r.peak_dbi = ff.peak_directivity_dbi();
  const double dmax = ff.peak_directivity();
  for (std::size_t t = 0; t < ff.grid.theta_deg.size(); ++t) {
    const double st = std::sin(ff.grid.theta_deg[t] * pi / 180.0);
    r.pattern_error = std::max(r.pattern_error, std::abs(ff.directivity[ff.index(t, 0)] / dmax - st * st));
  }
  return r;
}

void step_until(fdtd::FdtdSolver& s, long steps) {
  double e = 0.0;
  for (long n = 0; n < steps; ++n) {
    const bool chk = n % 50 == 0;
    s.step(chk ? &e : nullptr);
    if (chk && !std::isfinite(e))
      throw NumericalInstability("dipole fields diverged at step " + std::to_string(n) +
                                     "; the CFL factor must not exceed 1",
                                 n);
  }
}

}  // namespace

DipoleResult hertzian_dipole(const ValidationOptions& opts, double frequency_hz) {
  const int np = opts.absorber.cells, inset = 4, half = 16;
  const int n = 2 * (np + inset + half);
  auto grid = geom::VoxelGrid::uniform({n, n, n}, opts.cell_size);
  fdtd::SolverOptions so;
  so.cfl = opts.cfl;
  so.cpml = opts.absorber;
  so.threads = opts.threads;
  fdtd::FdtdSolver s(grid, so);
  s.add_current_source(fdtd::Component::ez, n / 2, n / 2, n / 2 - 1, band_pulse(opts));
  const int lo = np + inset, hi = n - np - inset;
  s.add_surface_dft({lo, lo, lo}, {hi, hi, hi}, {frequency_hz}, 1);
  const auto pulse = band_pulse(opts);
  step_until(s, long(std::ceil((pulse.end_time() + 4.0 * n * opts.cell_size / c0) / s.dt())));
  const auto ff = ntff::near_to_far(s.surface(), 0, ntff::AngularGrid::uniform(5.0));
  return pattern_metrics(ff);
}

DipoleResult half_wave_dipole(const ValidationOptions& opts, double length, double frequency_hz) {
  const int np = opts.absorber.cells, inset = 4, clear = 8;
  const int arm = int(std::lround(0.5 * length / opts.cell_size));
  const int nt = 2 * (np + inset + clear + 4);
  const int nz = 2 * (np + inset + clear + arm);
  auto grid = geom::VoxelGrid::uniform({nt, nt, nz}, opts.cell_size);
  fdtd::SolverOptions so;
  so.cfl = opts.cfl;
  so.cpml = opts.absorber;
  so.threads = opts.threads;
  fdtd::FdtdSolver s(grid, so);
  const int ic = nt / 2, kc = nz / 2;
  // Wire of 2*arm edges along z, fed across the edge just above the centre node.
  for (int k = kc - arm; k < kc + arm; ++k)
    if (k != kc) s.set_pec_edge(fdtd::Component::ez, ic, ic, k);
  fdtd::PortSpec port;
  port.axis = fdtd::Component::ez;
  port.gaps = {geom::FeedGap{1, {{ic, ic, kc}}}};
  port.waveform = band_pulse(opts);
  const int pid = s.add_port(port);
  const int lo_t = np + inset, hi_t = nt - np - inset, lo_z = np + inset, hi_z = nz - np - inset;
  s.add_surface_dft({lo_t, lo_t, lo_z}, {hi_t, hi_t, hi_z}, {frequency_hz}, 1);
  step_until(s, long(std::ceil((port.waveform.end_time() + 40.0 * nz * opts.cell_size / c0) / s.dt())));
  auto ff = ntff::near_to_far(s.surface(), 0, ntff::AngularGrid::uniform(5.0));
  fdtd::PortRecord rec;
  rec.dt = s.dt();
  rec.time_offset = 0.5 * s.dt();
  rec.voltage = s.port(pid).voltage;
  rec.current = s.port(pid).current;
  const double f[] = {frequency_hz};
  const auto ps = sparams::port_spectrum(rec, f);
  ff.accepted_power = ps.accepted_power(0);
  auto r = pattern_metrics(ff);
  r.pattern_error = 0.0;  // finite length: not a sin^2 pattern
  r.efficiency = ff.efficiency();
  return r;
}

// ------------------------------------------------------------------------

namespace {

template <class F>
ValidationItem timed(std::string name, std::string criterion, F&& body) {
  ValidationItem item;
  item.name = std::move(name);
  item.criterion = std::move(criterion);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(item);
  } catch (const NumericalInstability& e) {
    item.passed = false;
    item.measured = std::numeric_limits<double>::quiet_NaN();
    item.detail = std::string("instability detected: ") + e.what();
  }
  item.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return item;
}

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

}  // namespace

ValidationItem adl_item(const ValidationOptions& opts) {
  return timed("adl_identities", "no-layer and forward residuals <= 1e-12", [&](ValidationItem& it) {
    const auto r = adl_identities(opts.seed);
    it.measured = std::max({r.no_layer_k_error, r.no_layer_eps_error, r.forward_error});
    it.passed = it.measured <= 1e-12;
    it.detail = "k_err=" + fmt("%.2e", r.no_layer_k_error) + " eps_err=" + fmt("%.2e", r.no_layer_eps_error) +
                " fwd_err=" + fmt("%.2e", r.forward_error) + " n=" + std::to_string(r.samples);
  });
}

ValidationItem fresnel_item(const ValidationOptions& opts) {
  return timed("fresnel_silicon", "max relative |R| error < 2%", [&](ValidationItem& it) {
    const auto r = fresnel_column(opts);
    double worst = 0.0, at = 0.0;
    for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
      const double e = std::abs(r.measured[i] - r.analytic[i]) / r.analytic[i];
      if (e > worst) worst = e, at = r.frequencies[i];
    }
    it.measured = worst;
    it.passed = worst < 0.02;
    it.detail = "worst at " + fmt("%.0f", at / 1e9) + " GHz";
  });
}

ValidationItem absorber_item(const ValidationOptions& opts) {
  return timed("absorber_reflection", "reflection < -40 dB over the band", [&](ValidationItem& it) {
    const auto r = absorber_column(opts);
    double worst = -400.0, at = 0.0;
    for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
      const double db = 20.0 * std::log10(std::max(r.measured[i], 1e-20));
      if (db > worst) worst = db, at = r.frequencies[i];
    }
    it.measured = worst;
    it.passed = worst < -40.0;
    it.detail = "dB, worst at " + fmt("%.0f", at / 1e9) + " GHz, " + std::to_string(opts.absorber.cells) +
                " absorber cells";
  });
}

ValidationItem cavity_item(const ValidationOptions& opts) {
  return timed("cavity_energy", "energy drift < 0.5% over 5000 steps", [&](ValidationItem& it) {
    const auto r = cavity_energy(opts, 5000);
    it.measured = r.drift;
    it.passed = r.drift < 0.005;
    it.detail = "relative drift, cfl=" + fmt("%g", opts.cfl);
  });
}

ValidationItem hertzian_item(const ValidationOptions& opts) {
  return timed("hertzian_dipole", "peak D = 1.76 dBi +- 0.1", [&](ValidationItem& it) {
    const auto r = hertzian_dipole(opts);
    it.measured = r.peak_dbi;
    it.passed = std::abs(r.peak_dbi - 1.76) <= 0.1;
    it.detail = "dBi, sin^2 pattern error " + fmt("%.3f", r.pattern_error);
  });
}

ValidationItem half_wave_item(const ValidationOptions& opts) {
  return timed("half_wave_dipole", "peak D = 2.15 dBi +- 0.3", [&](ValidationItem& it) {
    const auto r = half_wave_dipole(opts);
    it.measured = r.peak_dbi;
    it.passed = std::abs(r.peak_dbi - 2.15) <= 0.3;
    it.detail = "dBi at " + fmt("%.0f", r.frequency_hz / 1e9) + " GHz, radiated/accepted " +
                fmt("%.3f", r.efficiency);
  });
}

ValidationReport run_validation(const ValidationOptions& opts) {
  ValidationReport rep;
  rep.items.push_back(adl_item(opts));
  rep.items.push_back(fresnel_item(opts));
  rep.items.push_back(absorber_item(opts));
  rep.items.push_back(cavity_item(opts));
  rep.items.push_back(hertzian_item(opts));
  rep.items.push_back(half_wave_item(opts));
  return rep;
}

}  // namespace aocsim::validation
