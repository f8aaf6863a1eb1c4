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

// Yee-grid FDTD engine: single-precision fields, semi-implicit conductive
// loss, CPML/PEC/periodic boundaries, lumped resistive ports and surface
// DFT recording for the far-field transform.
//
// Field layout: every component lives in an (nx+1)*(ny+1)*(nz+1) array,
// x fastest. Ex(i,j,k) sits at ((i+1/2)dx, j dx, k dx), Hx(i,j,k) at
// (i dx, (j+1/2)dx, (k+1/2)dx), and so on cyclically.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "aocsim/cpml.hpp"
#include "aocsim/ntff.hpp"
#include "aocsim/voxel_grid.hpp"

namespace aocsim::fdtd {

enum class Component : std::uint8_t { ex, ey, ez, hx, hy, hz };

enum class BoundaryKind { pec, cpml, periodic };

// Faces in the order x-, x+, y-, y+, z-, z+.
struct Boundaries {
  std::array<BoundaryKind, 6> faces{BoundaryKind::cpml, BoundaryKind::cpml, BoundaryKind::cpml,
                                    BoundaryKind::cpml, BoundaryKind::cpml, BoundaryKind::cpml};
  static Boundaries all(BoundaryKind k) { return {{k, k, k, k, k, k}}; }
  bool periodic(int axis) const { return faces[2 * axis] == BoundaryKind::periodic; }
};

// exp(-((t-t0)/tau)^2) * sin(2 pi f0 (t-t0)); the amplitude spectrum is
// down by 3 dB at f0 +- halfwidth.
struct GaussianPulse {
  double center_hz = 290e9;
  double halfwidth_hz = 120e9;
  double amplitude = 1.0;
  double delay_widths = 4.5;

  double tau() const;
  double t0() const { return delay_widths * tau(); }
  double end_time() const { return 2.0 * t0(); }
  double operator()(double t) const;
};

struct SolverOptions {
  double cfl = 0.99;
  Boundaries boundaries{};
  CpmlParams cpml{};
  int threads = 1;
};

struct PortSpec {
  std::vector<geom::FeedGap> gaps;  // parallel branches of series Ex/Ey/Ez edges
  Component axis = Component::ex;
  double reference_impedance = 50.0;
  GaussianPulse waveform{};
};

// Per-step port samples at t = (n + 1/2) dt.
struct PortSamples {
  std::vector<double> voltage, current, source;
};

class WorkerPool;

class FdtdSolver {
 public:
  FdtdSolver(const geom::VoxelGrid& grid, const SolverOptions& options);
  ~FdtdSolver();
  FdtdSolver(const FdtdSolver&) = delete;
  FdtdSolver& operator=(const FdtdSolver&) = delete;

  double dt() const { return dt_; }
  double cell_size() const { return dx_; }
  std::array<int, 3> dims() const { return {nx_, ny_, nz_}; }
  long step_index() const { return step_; }
  double time() const { return step_ * dt_; }

  void set_pec_edge(Component c, int i, int j, int k);
  void add_resistor(Component c, int i, int j, int k, double ohms);
  // Soft current element: I(t) amperes along the edge.
  void add_current_source(Component c, int i, int j, int k, GaussianPulse waveform);
  int add_port(const PortSpec& spec);
  int add_probe(Component c, int i, int j, int k);
  // Box given by node indices [lo, hi] along each axis.
  void add_surface_dft(std::array<int, 3> lo, std::array<int, 3> hi, std::vector<double> frequencies, int stride);

  // Advance one step. When `energy` is non-null it receives the discrete
  // energy at the start of the step, 1/2 sum(eps E^n.E^n + mu H^{n-1/2}.H^{n+1/2}) dV.
  void step(double* energy = nullptr);

  const PortSamples& port(int id) const { return ports_.at(std::size_t(id)).samples; }
  const std::vector<double>& probe(int id) const { return probes_.at(std::size_t(id)).samples; }
  const ntff::SurfaceDft& surface() const { return surface_; }
  bool has_surface() const { return surface_enabled_; }

  float field(Component c, int i, int j, int k) const { return fields_[int(c)][idx(i, j, k)]; }
  float& field(Component c, int i, int j, int k) { return fields_[int(c)][idx(i, j, k)]; }
  std::array<double, 3> origin() const { return origin_; }

 private:
  struct CoefEntry {
    double eps_r, sigma;
  };
  struct PsiBlock {
    int target, source, axis;
    float sign;
    std::array<int, 3> lo, hi;
    std::ptrdiff_t off_hi, off_lo;
    std::vector<float> a, b;  // along axis, offset by lo[axis]
    std::vector<float> psi;
  };
  struct PortEdge {
    std::size_t index;
    float orientation;
    double resistance;
    double source_gain;  // cb'/(R dx)
    float e_old;
  };
  struct PortState {
    PortSpec spec;
    std::vector<std::vector<PortEdge>> gaps;
    PortSamples samples;
  };
  struct CurrentSource {
    std::size_t index;
    int component;
    double gain;
    GaussianPulse waveform;
  };
  struct Probe {
    int component;
    std::size_t index;
    std::vector<double> samples;
  };

  std::size_t idx(int i, int j, int k) const { return std::size_t(i) + sx1_ * (std::size_t(j) + sy1_ * std::size_t(k)); }
  std::uint16_t coefficient_for(double eps_r, double sigma);
  void rebuild_coefficient_tables();
  void build_cpml();
  void update_h(int k0, int k1, double* energy);
  void update_e(int k0, int k1);
  double electric_energy() const;
  void apply_psi(PsiBlock& blk, int k0, int k1, bool electric);
  void periodic_copy();
  void sample_surface();
  void parallel(int k_lo, int k_hi, const std::function<void(int, int)>& fn);

  int nx_, ny_, nz_;
  std::size_t sx1_, sy1_;
  double dx_, dt_;
  float ch_;
  SolverOptions options_;
  std::array<double, 3> origin_{};
  std::array<std::vector<float>, 6> fields_;
  std::array<std::vector<std::uint16_t>, 3> coef_index_;
  std::vector<CoefEntry> coef_entries_;
  std::vector<float> ca_, cb_;
  std::vector<PsiBlock> psi_e_, psi_h_;
  std::vector<PortState> ports_;
  std::vector<CurrentSource> currents_;
  std::vector<Probe> probes_;
  ntff::SurfaceDft surface_;
  bool surface_enabled_ = false;
  std::array<int, 3> surf_lo_{}, surf_hi_{};
  int surface_stride_ = 1;
  long step_ = 0;
  std::unique_ptr<WorkerPool> pool_;
};

// ------------------------------------------------------------------------
// Antenna runs

struct SimulationConfig {
  long time_steps = 30000;  // upper bound; runs stop early once energy decays
  double cfl = 0.99;
  GaussianPulse source{};
  double port_reference_impedance = 50.0;
  CpmlParams absorber{};
  std::vector<double> dft_frequencies;  // far-field / efficiency frequencies
  int dft_stride = 10;
  int ntff_inset = 4;                   // cells between absorber and the NTFF box
  double decay_threshold = 1e-5;
  int energy_interval = 25;
  int threads = 1;

  double dt(double cell_size) const;
  void validate() const;
};

struct RunStats {
  long steps = 0;
  double dt = 0.0;
  double peak_energy = 0.0;
  double final_energy = 0.0;
  double decay_level = 1.0;  // final / peak
  bool decayed = false;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

struct PortRecord {
  double dt = 0.0;
  double time_offset = 0.0;  // sample n is at n*dt + time_offset
  double reference_impedance = 50.0;
  std::vector<double> voltage, current, source;
};

struct RunResult {
  PortRecord port;
  ntff::SurfaceDft surface;
  RunStats stats;
};

using StepObserver = std::function<void(long step, double energy)>;

/// Time-step a voxelized antenna fed at its CPW port until the field
/// energy decays below `decay_threshold` of its peak.
RunResult run(const geom::VoxelGrid& grid, const SimulationConfig& config, const StepObserver& observer = {});

}  // namespace aocsim::fdtd
