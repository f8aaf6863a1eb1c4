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
#include "aocsim/fdtd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"

namespace aocsim::fdtd {

using constants::c0;
using constants::eps0;
using constants::mu0;
using constants::pi;

// ------------------------------------------------------------------------
// Worker pool: the caller participates as worker 0.

class WorkerPool {
 public:
  explicit WorkerPool(int threads) : threads_(threads) {
    for (int t = 1; t < threads_; ++t) workers_.emplace_back([this, t] { loop(t); });
  }
  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
      ++generation_;
    }
    start_.notify_all();
  }
  int size() const { return threads_; }

  void run(const std::function<void(int)>& fn) {
    {
      std::lock_guard lock(mutex_);
      job_ = &fn;
      remaining_ = threads_ - 1;
      ++generation_;
    }
    start_.notify_all();
    fn(0);
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return remaining_ == 0; });
    job_ = nullptr;
  }

 private:
  void loop(int tid) {
    long seen = 0;
    for (;;) {
      const std::function<void(int)>* job;
      {
        std::unique_lock lock(mutex_);
        start_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
        job = job_;
      }
      (*job)(tid);
      {
        std::lock_guard lock(mutex_);
        if (--remaining_ == 0) done_.notify_one();
      }
    }
  }

  int threads_;
  std::vector<std::jthread> workers_;
  std::mutex mutex_;
  std::condition_variable start_, done_;
  const std::function<void(int)>* job_ = nullptr;
  long generation_ = 0;
  int remaining_ = 0;
  bool stop_ = false;
};

// ------------------------------------------------------------------------

double GaussianPulse::tau() const { return std::sqrt(std::log(std::sqrt(2.0))) / (pi * halfwidth_hz); }

double GaussianPulse::operator()(double t) const {
  const double s = t - t0();
  const double x = s / tau();
  return amplitude * std::exp(-x * x) * std::sin(2.0 * pi * center_hz * s);
}

namespace {

constexpr int kE[3] = {0, 1, 2};

}  // namespace

FdtdSolver::FdtdSolver(const geom::VoxelGrid& grid, const SolverOptions& options)
    : nx_(grid.dims[0]), ny_(grid.dims[1]), nz_(grid.dims[2]), dx_(grid.cell_size), options_(options) {
  if (nx_ < 1 || ny_ < 1 || nz_ < 1) throw ConfigError("grid must have at least one cell along every axis");
  if (!(dx_ > 0.0)) throw ConfigError("cell size must be positive");
  if (!(options.cfl > 0.0)) throw ConfigError("CFL factor must be positive");
  for (int a = 0; a < 3; ++a)
    if ((options.boundaries.faces[2 * a] == BoundaryKind::periodic) !=
        (options.boundaries.faces[2 * a + 1] == BoundaryKind::periodic))
      throw ConfigError("periodic boundaries must be set on both faces of an axis");

  sx1_ = std::size_t(nx_) + 1;
  sy1_ = std::size_t(ny_) + 1;
  dt_ = options.cfl * dx_ / (c0 * std::sqrt(3.0));
  ch_ = float(dt_ / (mu0 * dx_));
  origin_ = grid.origin;

  const std::size_t nodes = sx1_ * sy1_ * (std::size_t(nz_) + 1);
  for (auto& f : fields_) f.assign(nodes, 0.0f);
  for (auto& c : coef_index_) c.assign(nodes, 0);

  coef_entries_.push_back({1.0, 0.0});  // index 0: PEC / inactive edge

  const std::array<int, 3> n{nx_, ny_, nz_};
  const auto& bnd = options.boundaries;
  std::unordered_map<std::uint32_t, std::uint16_t> combo_cache;

  for (int c : kE) {
    const int b = (c + 1) % 3, d = (c + 2) % 3;
    auto& cidx = coef_index_[c];
    std::array<int, 3> p{};
    for (p[2] = 0; p[2] <= nz_; ++p[2])
      for (p[1] = 0; p[1] <= ny_; ++p[1])
        for (p[0] = 0; p[0] <= nx_; ++p[0]) {
          if (p[c] >= n[c]) continue;
          bool active = true;
          for (int t : {b, d}) {
            if (p[t] == n[t]) active = false;
            if (p[t] == 0 && !bnd.periodic(t)) active = false;
          }
          if (!active) continue;
          // Four cells sharing this edge, wrapped on periodic axes.
          std::array<std::uint8_t, 4> m{};
          int q = 0;
          for (int ob : {-1, 0})
            for (int od : {-1, 0}) {
              std::array<int, 3> cell = p;
              cell[b] += ob;
              cell[d] += od;
              for (int t : {b, d}) {
                if (cell[t] < 0) cell[t] = bnd.periodic(t) ? n[t] - 1 : 0;
                if (cell[t] >= n[t]) cell[t] = n[t] - 1;
              }
              m[q++] = grid.cells[grid.index(cell[0], cell[1], cell[2])];
            }
          std::sort(m.begin(), m.end());
          const std::uint32_t key = std::uint32_t(m[0]) | std::uint32_t(m[1]) << 8 | std::uint32_t(m[2]) << 16 |
                                    std::uint32_t(m[3]) << 24;
          auto it = combo_cache.find(key);
          if (it == combo_cache.end()) {
            double eps = 0.0, sig = 0.0;
            for (auto mi : m) {
              eps += 0.25 * grid.materials.at(mi).relative_permittivity;
              sig += 0.25 * grid.materials.at(mi).conductivity;
            }
            it = combo_cache.emplace(key, coefficient_for(eps, sig)).first;
          }
          cidx[idx(p[0], p[1], p[2])] = it->second;
        }
  }

  // Radiator sheet on its node plane.
  if (grid.metal_plane_k >= 0 && grid.metal_plane_k <= nz_ && !grid.metal.empty()) {
    const int k = grid.metal_plane_k;
    auto face_metal = [&](int i, int j) { return i >= 0 && j >= 0 && i < nx_ && j < ny_ && grid.metal_at(i, j); };
    const double sheet_sigma = grid.sheet_conductance / dx_;
    auto mark = [&](int comp, int i, int j) {
      auto& ci = coef_index_[comp][idx(i, j, k)];
      if (ci == 0) return;
      if (grid.metal_model == geom::MetalModel::pec) {
        ci = 0;
      } else {
        const auto e = coef_entries_[ci];
        ci = coefficient_for(e.eps_r, e.sigma + sheet_sigma);
      }
    };
    for (int j = 0; j <= ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        if (face_metal(i, j - 1) || face_metal(i, j)) mark(0, i, j);
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i <= nx_; ++i)
        if (face_metal(i - 1, j) || face_metal(i, j)) mark(1, i, j);
  }

  rebuild_coefficient_tables();
  build_cpml();
  if (options.threads > 1) pool_ = std::make_unique<WorkerPool>(options.threads);
}

FdtdSolver::~FdtdSolver() = default;

std::uint16_t FdtdSolver::coefficient_for(double eps_r, double sigma) {
  for (std::size_t i = 1; i < coef_entries_.size(); ++i)
    if (coef_entries_[i].eps_r == eps_r && coef_entries_[i].sigma == sigma) return std::uint16_t(i);
  if (coef_entries_.size() >= 65535) throw ConfigError("too many distinct edge materials");
  coef_entries_.push_back({eps_r, sigma});
  return std::uint16_t(coef_entries_.size() - 1);
}

void FdtdSolver::rebuild_coefficient_tables() {
  ca_.assign(coef_entries_.size(), 0.0f);
  cb_.assign(coef_entries_.size(), 0.0f);
  for (std::size_t i = 1; i < coef_entries_.size(); ++i) {
    const double eps = eps0 * coef_entries_[i].eps_r;
    const double loss = coef_entries_[i].sigma * dt_ / (2.0 * eps);
    ca_[i] = float((1.0 - loss) / (1.0 + loss));
    cb_[i] = float(dt_ / (eps * dx_) / (1.0 + loss));
  }
}

void FdtdSolver::build_cpml() {
  const int np = options_.cpml.cells;
  const std::array<int, 3> n{nx_, ny_, nz_};
  const std::array<std::ptrdiff_t, 3> stride{1, std::ptrdiff_t(sx1_), std::ptrdiff_t(sx1_ * sy1_)};
  for (int a = 0; a < 3; ++a) {
    for (int side = 0; side < 2; ++side) {
      if (options_.boundaries.faces[2 * a + side] != BoundaryKind::cpml || np <= 0) continue;
      if (2 * np >= n[a]) throw ConfigError("absorber is thicker than half the grid");
      const int b = (a + 1) % 3, c = (a + 2) % 3;

      auto make = [&](int target, int source, float sign, bool electric, std::array<int, 3> lo, std::array<int, 3> hi) {
        PsiBlock blk;
        blk.target = target;
        blk.source = source;
        blk.axis = a;
        blk.sign = sign;
        blk.lo = lo;
        blk.hi = hi;
        if (electric) {
          blk.off_hi = 0;
          blk.off_lo = -stride[a];
        } else {
          blk.off_hi = stride[a];
          blk.off_lo = 0;
        }
        for (int m = lo[a]; m < hi[a]; ++m) {
          double depth;
          if (electric)
            depth = side == 0 ? (np - m) * dx_ : (m - (n[a] - np)) * dx_;
          else
            depth = side == 0 ? (np - m - 0.5) * dx_ : (m + 0.5 - (n[a] - np)) * dx_;
          const auto coef = cpml_coefficients(options_.cpml, dx_, dt_, depth);
          blk.a.push_back(coef.a);
          blk.b.push_back(coef.b);
        }
        std::size_t size = 1;
        for (int t = 0; t < 3; ++t) size *= std::size_t(hi[t] - lo[t]);
        blk.psi.assign(size, 0.0f);
        (electric ? psi_e_ : psi_h_).push_back(std::move(blk));
      };

      std::array<int, 3> lo{}, hi{};
      // E_b gets -dH_c/da, E_c gets +dH_b/da.
      const int e_lo = side == 0 ? 1 : n[a] - np;
      const int e_hi = side == 0 ? np + 1 : n[a];
      lo[a] = e_lo;
      hi[a] = e_hi;
      lo[b] = 0, hi[b] = n[b];
      lo[c] = 0, hi[c] = n[c] + 1;
      make(b, 3 + c, -1.0f, true, lo, hi);
      lo[b] = 0, hi[b] = n[b] + 1;
      lo[c] = 0, hi[c] = n[c];
      make(c, 3 + b, +1.0f, true, lo, hi);
      // H_b gets +dE_c/da, H_c gets -dE_b/da.
      lo[a] = side == 0 ? 0 : n[a] - np;
      hi[a] = side == 0 ? np : n[a];
      lo[b] = 0, hi[b] = n[b] + 1;
      lo[c] = 0, hi[c] = n[c];
      make(3 + b, c, +1.0f, false, lo, hi);
      lo[b] = 0, hi[b] = n[b];
      lo[c] = 0, hi[c] = n[c] + 1;
      make(3 + c, b, -1.0f, false, lo, hi);
    }
  }
}

void FdtdSolver::set_pec_edge(Component c, int i, int j, int k) {
  if (int(c) > 2) throw ConfigError("PEC edges must be electric components");
  coef_index_[int(c)][idx(i, j, k)] = 0;
  fields_[int(c)][idx(i, j, k)] = 0.0f;
}

void FdtdSolver::add_resistor(Component c, int i, int j, int k, double ohms) {
  if (int(c) > 2 || !(ohms > 0.0)) throw ConfigError("resistor needs an electric edge and positive resistance");
  auto& ci = coef_index_[int(c)][idx(i, j, k)];
  if (ci == 0) throw ConfigError("resistor placed on a PEC edge");
  const auto e = coef_entries_[ci];
  ci = coefficient_for(e.eps_r, e.sigma + 1.0 / (ohms * dx_));
  rebuild_coefficient_tables();
}

void FdtdSolver::add_current_source(Component c, int i, int j, int k, GaussianPulse waveform) {
  if (int(c) > 2) throw ConfigError("current sources must be electric components");
  const std::size_t p = idx(i, j, k);
  const auto ci = coef_index_[int(c)][p];
  if (ci == 0) throw ConfigError("current source placed on a PEC edge");
  currents_.push_back({p, int(c), 0.0, waveform});
}

int FdtdSolver::add_port(const PortSpec& spec) {
  if (int(spec.axis) > 2) throw ConfigError("port edges must be electric components");
  if (spec.gaps.empty()) throw ConfigError("port has no gaps");
  if (!(spec.reference_impedance > 0.0)) throw ConfigError("port reference impedance must be positive");
  PortState st;
  st.spec = spec;
  const double r_gap = spec.reference_impedance * double(spec.gaps.size());
  for (const auto& gap : spec.gaps) {
    if (gap.edges.empty()) throw ConfigError("port gap has no edges");
    const double r_edge = r_gap / double(gap.edges.size());
    std::vector<PortEdge> edges;
    for (const auto& e : gap.edges) {
      const std::size_t p = idx(e[0], e[1], e[2]);
      auto& ci = coef_index_[int(spec.axis)][p];
      if (ci == 0) throw ConfigError("port edge lies on a PEC edge");
      const auto ent = coef_entries_[ci];
      ci = coefficient_for(ent.eps_r, ent.sigma + 1.0 / (r_edge * dx_));
      edges.push_back({p, float(gap.orientation), r_edge, 0.0, 0.0f});
    }
    st.gaps.push_back(std::move(edges));
  }
  rebuild_coefficient_tables();
  for (auto& g : st.gaps)
    for (auto& e : g) e.source_gain = cb_[coef_index_[int(spec.axis)][e.index]] / (e.resistance * dx_);
  ports_.push_back(std::move(st));
  return int(ports_.size() - 1);
}

int FdtdSolver::add_probe(Component c, int i, int j, int k) {
  probes_.push_back({int(c), idx(i, j, k), {}});
  return int(probes_.size() - 1);
}

void FdtdSolver::add_surface_dft(std::array<int, 3> lo, std::array<int, 3> hi, std::vector<double> frequencies,
                                 int stride) {
  const std::array<int, 3> n{nx_, ny_, nz_};
  for (int a = 0; a < 3; ++a)
    if (lo[a] < 1 || hi[a] > n[a] - 1 || hi[a] - lo[a] < 2)
      throw ConfigError("far-field surface must lie strictly inside the grid");
  if (stride < 1) throw ConfigError("DFT stride must be >= 1");
  surf_lo_ = lo;
  surf_hi_ = hi;
  surface_stride_ = stride;
  surface_ = {};
  surface_.cell_size = dx_;
  surface_.frequencies = std::move(frequencies);
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      auto& f = surface_.faces[2 * a + side];
      f.axis = a;
      f.side = side == 0 ? -1 : 1;
      f.plane = origin_[a] + (side == 0 ? lo[a] : hi[a]) * dx_;
      f.b0 = origin_[b] + (lo[b] + 0.5) * dx_;
      f.c0 = origin_[c] + (lo[c] + 0.5) * dx_;
      f.nu = hi[b] - lo[b];
      f.nv = hi[c] - lo[c];
    }
  }
  surface_.allocate();
  surface_enabled_ = true;
}

void FdtdSolver::parallel(int k_lo, int k_hi, const std::function<void(int, int)>& fn) {
  if (k_hi <= k_lo) return;
  if (!pool_) {
    fn(k_lo, k_hi);
    return;
  }
  const int T = pool_->size();
  pool_->run([&](int tid) {
    const int span = k_hi - k_lo;
    const int a = k_lo + int(std::int64_t(span) * tid / T);
    const int b = k_lo + int(std::int64_t(span) * (tid + 1) / T);
    if (b > a) fn(a, b);
  });
}

void FdtdSolver::update_h(int k0, int k1, double* energy) {
  float* hx = fields_[3].data();
  float* hy = fields_[4].data();
  float* hz = fields_[5].data();
  const float* ex = fields_[0].data();
  const float* ey = fields_[1].data();
  const float* ez = fields_[2].data();
  const float ch = ch_;
  const std::size_t sy = sx1_, sz = sx1_ * sy1_;
  double acc = 0.0;

  for (int k = k0; k < k1; ++k) {
    for (int j = 0; j <= ny_; ++j) {
      const std::size_t r = idx(0, j, k);
      if (k < nz_ && j < ny_) {  // Hx: i in [0, nx]
        float* h = hx + r;
        const float* ey0 = ey + r;
        const float* ey1 = ey + r + sz;
        const float* ez0 = ez + r;
        const float* ez1 = ez + r + sy;
        if (energy) {
          for (int i = 0; i <= nx_; ++i) {
            const float old = h[i];
            h[i] = old + ch * ((ey1[i] - ey0[i]) - (ez1[i] - ez0[i]));
            acc += double(old) * h[i];
          }
        } else {
          for (int i = 0; i <= nx_; ++i) h[i] += ch * ((ey1[i] - ey0[i]) - (ez1[i] - ez0[i]));
        }
      }
      if (k < nz_) {  // Hy: j in [0, ny]
        float* h = hy + r;
        const float* ez0 = ez + r;
        const float* ex0 = ex + r;
        const float* ex1 = ex + r + sz;
        if (energy) {
          for (int i = 0; i < nx_; ++i) {
            const float old = h[i];
            h[i] = old + ch * ((ez0[i + 1] - ez0[i]) - (ex1[i] - ex0[i]));
            acc += double(old) * h[i];
          }
        } else {
          for (int i = 0; i < nx_; ++i) h[i] += ch * ((ez0[i + 1] - ez0[i]) - (ex1[i] - ex0[i]));
        }
      }
      if (j < ny_) {  // Hz: k in [0, nz]
        float* h = hz + r;
        const float* ex0 = ex + r;
        const float* ex1 = ex + r + sy;
        const float* ey0 = ey + r;
        if (energy) {
          for (int i = 0; i < nx_; ++i) {
            const float old = h[i];
            h[i] = old + ch * ((ex1[i] - ex0[i]) - (ey0[i + 1] - ey0[i]));
            acc += double(old) * h[i];
          }
        } else {
          for (int i = 0; i < nx_; ++i) h[i] += ch * ((ex1[i] - ex0[i]) - (ey0[i + 1] - ey0[i]));
        }
      }
    }
  }
  if (energy) *energy += acc;
}

void FdtdSolver::update_e(int k0, int k1) {
  float* ex = fields_[0].data();
  float* ey = fields_[1].data();
  float* ez = fields_[2].data();
  const float* hx = fields_[3].data();
  const float* hy = fields_[4].data();
  const float* hz = fields_[5].data();
  const float* ca = ca_.data();
  const float* cb = cb_.data();
  const auto& bnd = options_.boundaries;
  const bool px = bnd.periodic(0), py = bnd.periodic(1), pz = bnd.periodic(2);
  const int jlo = py ? 0 : 1, klo = pz ? 0 : 1;

  for (int k = std::max(k0, 0); k < std::min(k1, nz_ + 1); ++k) {
    const int km = k == 0 ? nz_ - 1 : k - 1;
    for (int j = 0; j < ny_ + 1; ++j) {
      const int jm = j == 0 ? ny_ - 1 : j - 1;
      const std::size_t r = idx(0, j, k);
      // Ex
      if (k >= klo && k < nz_ && j >= jlo && j < ny_) {
        float* e = ex + r;
        const std::uint16_t* c = coef_index_[0].data() + r;
        const float* hz0 = hz + r;
        const float* hzm = hz + idx(0, jm, k);
        const float* hy0 = hy + r;
        const float* hym = hy + idx(0, j, km);
        for (int i = 0; i < nx_; ++i) e[i] = ca[c[i]] * e[i] + cb[c[i]] * ((hz0[i] - hzm[i]) - (hy0[i] - hym[i]));
      }
      // Ey
      if (k >= klo && k < nz_ && j < ny_) {
        float* e = ey + r;
        const std::uint16_t* c = coef_index_[1].data() + r;
        const float* hx0 = hx + r;
        const float* hxm = hx + idx(0, j, km);
        const float* hz0 = hz + r;
        for (int i = 1; i < nx_; ++i)
          e[i] = ca[c[i]] * e[i] + cb[c[i]] * ((hx0[i] - hxm[i]) - (hz0[i] - hz0[i - 1]));
        if (px) e[0] = ca[c[0]] * e[0] + cb[c[0]] * ((hx0[0] - hxm[0]) - (hz0[0] - hz0[nx_ - 1]));
      }
      // Ez
      if (k < nz_ && j >= jlo && j < ny_) {
        float* e = ez + r;
        const std::uint16_t* c = coef_index_[2].data() + r;
        const float* hy0 = hy + r;
        const float* hx0 = hx + r;
        const float* hxm = hx + idx(0, jm, k);
        for (int i = 1; i < nx_; ++i)
          e[i] = ca[c[i]] * e[i] + cb[c[i]] * ((hy0[i] - hy0[i - 1]) - (hx0[i] - hxm[i]));
        if (px) e[0] = ca[c[0]] * e[0] + cb[c[0]] * ((hy0[0] - hy0[nx_ - 1]) - (hx0[0] - hxm[0]));
      }
    }
  }
}

void FdtdSolver::apply_psi(PsiBlock& blk, int k0, int k1, bool electric) {
  float* tgt = fields_[blk.target].data();
  const float* src = fields_[blk.source].data();
  const std::uint16_t* coef = electric ? coef_index_[blk.target].data() : nullptr;
  const float* cb = cb_.data();
  const int w0 = blk.hi[0] - blk.lo[0];
  const int w1 = blk.hi[1] - blk.lo[1];
  const int kb = std::max(k0, blk.lo[2]), ke = std::min(k1, blk.hi[2]);
  for (int k = kb; k < ke; ++k) {
    for (int j = blk.lo[1]; j < blk.hi[1]; ++j) {
      std::size_t m = (std::size_t(k - blk.lo[2]) * w1 + (j - blk.lo[1])) * w0;
      const std::size_t p0 = idx(blk.lo[0], j, k);
      for (int i = 0; i < w0; ++i, ++m) {
        const std::size_t p = p0 + i;
        const int n = (blk.axis == 0 ? blk.lo[0] + i : blk.axis == 1 ? j : k) - blk.lo[blk.axis];
        const float d = src[p + blk.off_hi] - src[p + blk.off_lo];
        const float psi = blk.b[n] * blk.psi[m] + blk.a[n] * d;
        blk.psi[m] = psi;
        tgt[p] += blk.sign * (electric ? cb[coef[p]] : ch_) * psi;
      }
    }
  }
}

void FdtdSolver::periodic_copy() {
  auto& ex = fields_[0];
  auto& ey = fields_[1];
  auto& ez = fields_[2];
  const auto& bnd = options_.boundaries;
  if (bnd.periodic(0))
    for (int k = 0; k <= nz_; ++k)
      for (int j = 0; j <= ny_; ++j) {
        ey[idx(nx_, j, k)] = ey[idx(0, j, k)];
        ez[idx(nx_, j, k)] = ez[idx(0, j, k)];
      }
  if (bnd.periodic(1))
    for (int k = 0; k <= nz_; ++k)
      for (int i = 0; i <= nx_; ++i) {
        ex[idx(i, ny_, k)] = ex[idx(i, 0, k)];
        ez[idx(i, ny_, k)] = ez[idx(i, 0, k)];
      }
  if (bnd.periodic(2))
    for (int j = 0; j <= ny_; ++j)
      for (int i = 0; i <= nx_; ++i) {
        ex[idx(i, j, nz_)] = ex[idx(i, j, 0)];
        ey[idx(i, j, nz_)] = ey[idx(i, j, 0)];
      }
}

double FdtdSolver::electric_energy() const {
  std::vector<double> eps(coef_entries_.size());
  for (std::size_t i = 1; i < eps.size(); ++i) eps[i] = eps0 * coef_entries_[i].eps_r;
  double acc = 0.0;
  for (int c : kE) {
    const auto& f = fields_[c];
    const auto& ci = coef_index_[c];
    for (std::size_t p = 0; p < f.size(); ++p) acc += eps[ci[p]] * double(f[p]) * f[p];
  }
  return acc;
}

void FdtdSolver::sample_surface() {
  const double t_e = step_ * dt_;
  const double t_h = (step_ + 0.5) * dt_;
  const double weight = surface_stride_ * dt_;
  const std::size_t nf = surface_.frequencies.size();
  std::vector<ntff::cfloat> pe(nf), ph(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const double w = 2.0 * pi * surface_.frequencies[f];
    pe[f] = ntff::cfloat(std::polar(weight, -w * t_e));
    ph[f] = ntff::cfloat(std::polar(weight, -w * t_h));
  }
  const std::array<std::ptrdiff_t, 3> stride{1, std::ptrdiff_t(sx1_), std::ptrdiff_t(sx1_ * sy1_)};
  std::vector<float> vals;
  for (auto& face : surface_.faces) {
    const int a = face.axis, b = (a + 1) % 3, c = (a + 2) % 3;
    const int plane = face.side < 0 ? surf_lo_[a] : surf_hi_[a];
    const float* Eb = fields_[b].data();
    const float* Ec = fields_[c].data();
    const float* Hb = fields_[3 + b].data();
    const float* Hc = fields_[3 + c].data();
    const std::size_t blk = face.block();
    vals.resize(4 * blk);
    for (int v = 0; v < face.nv; ++v)
      for (int u = 0; u < face.nu; ++u) {
        std::array<int, 3> pos{};
        pos[a] = plane;
        pos[b] = surf_lo_[b] + u;
        pos[c] = surf_lo_[c] + v;
        const std::size_t p = idx(pos[0], pos[1], pos[2]);
        const std::ptrdiff_t sa = stride[a], sb = stride[b], sc = stride[c];
        const std::size_t m = std::size_t(v) * face.nu + u;
        vals[m] = 0.5f * (Eb[p] + Eb[p + sc]);
        vals[blk + m] = 0.5f * (Ec[p] + Ec[p + sb]);
        vals[2 * blk + m] = 0.25f * (Hb[p] + Hb[p + sb] + Hb[p - sa] + Hb[p - sa + sb]);
        vals[3 * blk + m] = 0.25f * (Hc[p] + Hc[p + sc] + Hc[p - sa] + Hc[p - sa + sc]);
      }
    for (std::size_t f = 0; f < nf; ++f)
      for (int comp = 0; comp < 4; ++comp) {
        ntff::cfloat* dst = face.at(f, comp);
        const ntff::cfloat ph_c = comp < 2 ? pe[f] : ph[f];
        const float* src = vals.data() + comp * blk;
        for (std::size_t m = 0; m < blk; ++m) dst[m] += src[m] * ph_c;
      }
  }
}

void FdtdSolver::step(double* energy) {
  double e_h = 0.0;
  if (energy && pool_) {
    std::vector<double> partial(std::size_t(pool_->size()), 0.0);
    std::mutex mu;
    std::map<int, double> by_chunk;
    parallel(0, nz_ + 1, [&](int k0, int k1) {
      double local = 0.0;
      update_h(k0, k1, &local);
      std::lock_guard lock(mu);
      by_chunk[k0] = local;
    });
    for (const auto& [k, v] : by_chunk) e_h += v;
  } else {
    parallel(0, nz_ + 1, [&](int k0, int k1) { update_h(k0, k1, energy ? &e_h : nullptr); });
  }
  for (auto& blk : psi_h_) parallel(blk.lo[2], blk.hi[2], [&](int k0, int k1) { apply_psi(blk, k0, k1, false); });

  if (energy) *energy = 0.5 * (electric_energy() + mu0 * e_h) * dx_ * dx_ * dx_;
  if (surface_enabled_ && step_ % surface_stride_ == 0) sample_surface();

  for (auto& port : ports_)
    for (auto& gap : port.gaps)
      for (auto& e : gap) e.e_old = fields_[int(port.spec.axis)][e.index];

  parallel(0, nz_ + 1, [&](int k0, int k1) { update_e(k0, k1); });
  for (auto& blk : psi_e_) parallel(blk.lo[2], blk.hi[2], [&](int k0, int k1) { apply_psi(blk, k0, k1, true); });

  const double t_half = (step_ + 0.5) * dt_;
  for (auto& src : currents_) {
    const auto ci = coef_index_[src.component][src.index];
    fields_[src.component][src.index] -= float(double(cb_[ci]) / dx_ * src.waveform(t_half));
  }
  for (auto& port : ports_) {
    const double vs = port.spec.waveform(t_half);
    auto& f = fields_[int(port.spec.axis)];
    double v_total = 0.0, i_total = 0.0;
    for (auto& gap : port.gaps) {
      const double ve = vs / double(gap.size());
      double v_gap = 0.0, i_gap = 0.0;
      for (auto& e : gap) {
        f[e.index] += float(e.orientation * e.source_gain * ve);
        const double v_edge = e.orientation * 0.5 * (double(e.e_old) + f[e.index]) * dx_;
        v_gap += v_edge;
        i_gap += -(v_edge - ve) / e.resistance;
      }
      v_total += v_gap;
      i_total += i_gap / double(gap.size());
    }
    port.samples.voltage.push_back(v_total / double(port.gaps.size()));
    port.samples.current.push_back(i_total);
    port.samples.source.push_back(vs);
  }

  periodic_copy();
  for (auto& pr : probes_) pr.samples.push_back(fields_[pr.component][pr.index]);
  ++step_;
}

// ------------------------------------------------------------------------

double SimulationConfig::dt(double cell_size) const { return cfl * cell_size / (c0 * std::sqrt(3.0)); }

void SimulationConfig::validate() const {
  if (time_steps < 1) throw ConfigError("time_steps must be positive");
  if (!(cfl > 0.0)) throw ConfigError("CFL factor must be positive");
  if (!(port_reference_impedance > 0.0)) throw ConfigError("port reference impedance must be positive");
  if (dft_stride < 1) throw ConfigError("DFT stride must be >= 1");
  if (ntff_inset < 1) throw ConfigError("NTFF inset must be at least one cell");
  if (!(decay_threshold > 0.0)) throw ConfigError("decay threshold must be positive");
  if (energy_interval < 1) throw ConfigError("energy interval must be >= 1");
  for (double f : dft_frequencies)
    if (!(f > 0.0)) throw ConfigError("DFT frequencies must be positive");
  const double lo = source.center_hz - source.halfwidth_hz, hi = source.center_hz + source.halfwidth_hz;
  for (double f : dft_frequencies)
    if (f < lo - 1e-6 * f || f > hi + 1e-6 * f) {
      std::ostringstream os;
      os << "DFT frequency " << f / 1e9 << " GHz lies outside the -3 dB band of the source";
      throw ConfigError(os.str());
    }
}

RunResult run(const geom::VoxelGrid& grid, const SimulationConfig& config, const StepObserver& observer) {
  config.validate();
  if (grid.feed.empty()) throw ConfigError("voxel grid has no feed port");
  if (grid.absorber_cells != config.absorber.cells)
    throw ConfigError("voxel grid was rasterized for a different absorber thickness");

  const auto t_start = std::chrono::steady_clock::now();
  SolverOptions opts;
  opts.cfl = config.cfl;
  opts.boundaries = Boundaries::all(BoundaryKind::cpml);
  opts.cpml = config.absorber;
  opts.threads = config.threads;
  FdtdSolver solver(grid, opts);

  PortSpec port;
  port.gaps = grid.feed;
  port.axis = Component::ex;
  port.reference_impedance = config.port_reference_impedance;
  port.waveform = config.source;
  const int port_id = solver.add_port(port);

  const int inset = config.absorber.cells + config.ntff_inset;
  const std::array<int, 3> lo{inset, inset, inset};
  const std::array<int, 3> hi{grid.dims[0] - inset, grid.dims[1] - inset, grid.dims[2] - inset};
  const std::array<std::array<int, 2>, 3> chip{grid.chip_x, grid.chip_y, grid.chip_z};
  for (int a = 0; a < 3; ++a) {
    const int feature_lo = a == 2 ? std::min(chip[a][0], grid.metal_plane_k) : chip[a][0];
    const int feature_hi = a == 2 ? std::max(chip[a][1], grid.metal_plane_k) : chip[a][1];
    if (lo[a] >= feature_lo || hi[a] <= feature_hi)
      throw ConfigError("far-field surface intersects the chip or the absorber; increase the air margin");
  }
  if (!config.dft_frequencies.empty()) solver.add_surface_dft(lo, hi, config.dft_frequencies, config.dft_stride);

  RunResult result;
  result.stats.dt = solver.dt();
  result.stats.warnings = grid.warnings;
  double peak = 0.0, peak_during_source = 0.0, energy = 0.0;
  const double source_end = config.source.end_time();
  long n = 0;
  for (; n < config.time_steps; ++n) {
    const bool check = n % config.energy_interval == 0;
    solver.step(check ? &energy : nullptr);
    if (!check) continue;
    if (!std::isfinite(energy)) {
      std::ostringstream os;
      os << "non-finite field energy at step " << n << "; the CFL factor " << config.cfl
         << " must not exceed 1, and material parameters must be finite";
      throw NumericalInstability(os.str(), n);
    }
    const double t = n * solver.dt();
    if (t <= source_end) peak_during_source = std::max(peak_during_source, energy);
    if (t > source_end && peak_during_source > 0.0 && energy > 1e3 * peak_during_source) {
      std::ostringstream os;
      os << "field energy grew by " << energy / peak_during_source << "x after the source ended (step " << n
         << "); check the CFL factor and material parameters";
      throw NumericalInstability(os.str(), n);
    }
    peak = std::max(peak, energy);
    if (observer) observer(n, energy);
    if (t > source_end && peak > 0.0 && energy < config.decay_threshold * peak) {
      result.stats.decayed = true;
      ++n;
      break;
    }
  }
  result.stats.steps = n;
  result.stats.peak_energy = peak;
  result.stats.final_energy = energy;
  result.stats.decay_level = peak > 0.0 ? energy / peak : 0.0;
  if (!result.stats.decayed) {
    std::ostringstream os;
    os << "field energy decayed only to " << result.stats.decay_level << " of its peak after " << n
       << " steps; increase time_steps";
    result.stats.warnings.push_back(os.str());
  }

  const auto& samples = solver.port(port_id);
  result.port.dt = solver.dt();
  result.port.time_offset = 0.5 * solver.dt();
  result.port.reference_impedance = config.port_reference_impedance;
  result.port.voltage = samples.voltage;
  result.port.current = samples.current;
  result.port.source = samples.source;
  if (solver.has_surface()) result.surface = solver.surface();
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

}  // namespace aocsim::fdtd
