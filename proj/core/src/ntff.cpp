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
#include "aocsim/ntff.hpp"

#include <algorithm>
#include <cmath>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"

namespace aocsim::ntff {

using constants::c0;
using constants::eta0;
using constants::pi;

void SurfaceDft::allocate() {
  for (auto& f : faces) f.data.assign(frequencies.size() * 4 * f.block(), cfloat{});
}

double SurfaceDft::flux(std::size_t freq) const {
  if (freq >= frequencies.size()) throw DomainError("frequency index out of range");
  const double area = cell_size * cell_size;
  double total = 0.0;
  for (const auto& f : faces) {
    const cfloat* eb = f.at(freq, 0);
    const cfloat* ec = f.at(freq, 1);
    const cfloat* hb = f.at(freq, 2);
    const cfloat* hc = f.at(freq, 3);
    double acc = 0.0;
    for (std::size_t m = 0; m < f.block(); ++m) {
      const cdouble s = cdouble(eb[m]) * std::conj(cdouble(hc[m])) - cdouble(ec[m]) * std::conj(cdouble(hb[m]));
      acc += s.real();
    }
    total += 0.5 * f.side * acc * area;
  }
  return total;
}

AngularGrid AngularGrid::uniform(double step_deg) {
  if (!(step_deg > 0.0) || step_deg > 90.0) throw DomainError("angular step must lie in (0, 90] degrees");
  AngularGrid g;
  const int nt = int(std::lround(180.0 / step_deg));
  const int np = int(std::lround(360.0 / step_deg));
  if (std::abs(nt * step_deg - 180.0) > 1e-9) throw DomainError("angular step must divide 180 degrees");
  for (int t = 0; t <= nt; ++t) g.theta_deg.push_back(t * step_deg);
  for (int p = 0; p < np; ++p) g.phi_deg.push_back(p * step_deg);
  return g;
}

double FarFieldSolution::peak_directivity() const {
  return directivity.empty() ? 0.0 : *std::max_element(directivity.begin(), directivity.end());
}

double FarFieldSolution::peak_directivity_dbi() const { return 10.0 * std::log10(peak_directivity()); }

namespace {

// Samples merged into patches no larger than lambda/30 along each side.
constexpr double kPatchFraction = 30.0;

struct PatchFace {
  int axis, side;
  double plane;
  int nu, nv;
  std::vector<double> pb, pc;          // patch centres
  std::vector<cdouble> jb, jc, mb, mc;  // integrated currents, [v][u]
};

PatchFace aggregate(const FaceDft& f, std::size_t freq, double cell, int block) {
  PatchFace p;
  p.axis = f.axis;
  p.side = f.side;
  p.plane = f.plane;
  p.nu = (f.nu + block - 1) / block;
  p.nv = (f.nv + block - 1) / block;
  const double area = cell * cell;
  for (int u = 0; u < p.nu; ++u) {
    const int u1 = std::min(f.nu, (u + 1) * block);
    p.pb.push_back(f.b0 + 0.5 * (u * block + u1 - 1) * cell);
  }
  for (int v = 0; v < p.nv; ++v) {
    const int v1 = std::min(f.nv, (v + 1) * block);
    p.pc.push_back(f.c0 + 0.5 * (v * block + v1 - 1) * cell);
  }
  const std::size_t np = std::size_t(p.nu) * p.nv;
  p.jb.assign(np, {});
  p.jc.assign(np, {});
  p.mb.assign(np, {});
  p.mc.assign(np, {});
  const cfloat* eb = f.at(freq, 0);
  const cfloat* ec = f.at(freq, 1);
  const cfloat* hb = f.at(freq, 2);
  const cfloat* hc = f.at(freq, 3);
  const double s = f.side;
  for (int v = 0; v < f.nv; ++v)
    for (int u = 0; u < f.nu; ++u) {
      const std::size_t m = std::size_t(v) * f.nu + u;
      const std::size_t q = std::size_t(v / block) * p.nu + u / block;
      // J = n x H, M = -n x E with n = s e_a.
      p.jb[q] += -s * cdouble(hc[m]) * area;
      p.jc[q] += s * cdouble(hb[m]) * area;
      p.mb[q] += s * cdouble(ec[m]) * area;
      p.mc[q] += -s * cdouble(eb[m]) * area;
    }
  return p;
}

}  // namespace

FarFieldSolution near_to_far(const SurfaceDft& surface, std::size_t freq_index, const AngularGrid& grid) {
  if (freq_index >= surface.frequencies.size()) throw DomainError("frequency index out of range");
  if (grid.theta_deg.empty() || grid.phi_deg.empty()) throw DomainError("empty angular grid");
  const double f = surface.frequencies[freq_index];
  const double k = 2.0 * pi * f / c0;
  const double lambda = c0 / f;
  const int block = std::max(1, int(std::floor(lambda / (kPatchFraction * surface.cell_size))));

  std::vector<PatchFace> faces;
  for (const auto& face : surface.faces)
    if (face.block() > 0) faces.push_back(aggregate(face, freq_index, surface.cell_size, block));

  FarFieldSolution sol;
  sol.frequency_hz = f;
  sol.grid = grid;
  const std::size_t nt = grid.theta_deg.size(), np = grid.phi_deg.size();
  sol.e_theta.resize(nt * np);
  sol.e_phi.resize(nt * np);
  sol.intensity.resize(nt * np);

  const cdouble j(0.0, 1.0);
  std::vector<cdouble> phase_b, phase_c;
  for (std::size_t t = 0; t < nt; ++t) {
    const double th = grid.theta_deg[t] * pi / 180.0;
    for (std::size_t p = 0; p < np; ++p) {
      const double ph = grid.phi_deg[p] * pi / 180.0;
      const std::array<double, 3> r{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      std::array<cdouble, 3> N{}, L{};
      for (const auto& pf : faces) {
        const int a = pf.axis, b = (a + 1) % 3, c = (a + 2) % 3;
        phase_b.resize(std::size_t(pf.nu));
        phase_c.resize(std::size_t(pf.nv));
        for (int u = 0; u < pf.nu; ++u) phase_b[u] = std::polar(1.0, k * r[b] * pf.pb[u]);
        for (int v = 0; v < pf.nv; ++v) phase_c[v] = std::polar(1.0, k * r[c] * pf.pc[v]);
        cdouble sjb{}, sjc{}, smb{}, smc{};
        for (int v = 0; v < pf.nv; ++v) {
          cdouble rjb{}, rjc{}, rmb{}, rmc{};
          const std::size_t row = std::size_t(v) * pf.nu;
          for (int u = 0; u < pf.nu; ++u) {
            const cdouble w = phase_b[u];
            rjb += pf.jb[row + u] * w;
            rjc += pf.jc[row + u] * w;
            rmb += pf.mb[row + u] * w;
            rmc += pf.mc[row + u] * w;
          }
          sjb += rjb * phase_c[v];
          sjc += rjc * phase_c[v];
          smb += rmb * phase_c[v];
          smc += rmc * phase_c[v];
        }
        const cdouble pa = std::polar(1.0, k * r[a] * pf.plane);
        N[b] += sjb * pa;
        N[c] += sjc * pa;
        L[b] += smb * pa;
        L[c] += smc * pa;
      }
      const double ct = std::cos(th), st = std::sin(th), cp = std::cos(ph), sp = std::sin(ph);
      const cdouble n_t = N[0] * ct * cp + N[1] * ct * sp - N[2] * st;
      const cdouble n_p = -N[0] * sp + N[1] * cp;
      const cdouble l_t = L[0] * ct * cp + L[1] * ct * sp - L[2] * st;
      const cdouble l_p = -L[0] * sp + L[1] * cp;
      const cdouble a_t = l_p + eta0 * n_t;
      const cdouble a_p = l_t - eta0 * n_p;
      const std::size_t idx = sol.index(t, p);
      sol.e_theta[idx] = -j * k / (4.0 * pi) * a_t;
      sol.e_phi[idx] = j * k / (4.0 * pi) * a_p;
      sol.intensity[idx] = k * k / (32.0 * pi * pi * eta0) * (std::norm(a_t) + std::norm(a_p));
    }
  }
  sol.radiated_power = integrate_intensity(grid, sol.intensity);
  sol.directivity = directivity_from_intensity(grid, sol.intensity);
  sol.surface_power = surface.flux(freq_index);
  return sol;
}

double integrate_intensity(const AngularGrid& grid, std::span<const double> intensity) {
  const std::size_t nt = grid.theta_deg.size(), np = grid.phi_deg.size();
  if (intensity.size() != nt * np) throw DomainError("intensity size does not match the angular grid");
  if (nt < 2 || np < 1) throw DomainError("angular grid too small to integrate");
  // Exact integral of sin(theta) times the piecewise-linear interpolant in theta.
  std::vector<double> w(nt, 0.0);
  for (std::size_t t = 0; t + 1 < nt; ++t) {
    const double a = grid.theta_deg[t] * pi / 180.0, b = grid.theta_deg[t + 1] * pi / 180.0;
    const double h = b - a;
    w[t] += std::cos(a) + (std::sin(a) - std::sin(b)) / h;
    w[t + 1] += -std::cos(b) + (std::sin(b) - std::sin(a)) / h;
  }
  const double dphi = 2.0 * pi / double(np);
  double total = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    double row = 0.0;
    for (std::size_t p = 0; p < np; ++p) row += intensity[t * np + p];
    total += w[t] * row * dphi;
  }
  return total;
}

std::vector<double> directivity_from_intensity(const AngularGrid& grid, std::span<const double> intensity) {
  const double prad = integrate_intensity(grid, intensity);
  if (!(prad > 0.0)) throw DomainError("radiated power is zero; directivity undefined");
  std::vector<double> d(intensity.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = 4.0 * pi * intensity[i] / prad;
  return d;
}

}  // namespace aocsim::ntff
