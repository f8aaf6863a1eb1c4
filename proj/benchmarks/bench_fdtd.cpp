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
#include <benchmark/benchmark.h>

#include "aocsim/effective_medium.hpp"
#include "aocsim/fdtd.hpp"
#include "aocsim/ntff.hpp"

using namespace aocsim;

namespace {

// One leapfrog step on an n^3 vacuum grid with a 10-cell absorber on every face.
void BM_FdtdStep(benchmark::State& state) {
  const int n = int(state.range(0));
  fdtd::SolverOptions opts;
  opts.threads = int(state.range(1));
  fdtd::FdtdSolver solver(geom::VoxelGrid::uniform({n, n, n}, 5e-6), opts);
  solver.add_current_source(fdtd::Component::ez, n / 2, n / 2, n / 2, fdtd::GaussianPulse{});
  for (auto _ : state) solver.step();
  state.SetItemsProcessed(state.iterations() * std::int64_t(n) * n * n);
  state.counters["cells/s"] = benchmark::Counter(double(n) * n * n, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_FdtdStep)->Args({48, 1})->Args({96, 1})->Args({96, 2})->Unit(benchmark::kMillisecond);

void BM_FdtdStepWithEnergy(benchmark::State& state) {
  const int n = int(state.range(0));
  fdtd::FdtdSolver solver(geom::VoxelGrid::uniform({n, n, n}, 5e-6), fdtd::SolverOptions{});
  solver.add_current_source(fdtd::Component::ez, n / 2, n / 2, n / 2, fdtd::GaussianPulse{});
  double energy = 0.0;
  for (auto _ : state) {
    solver.step(&energy);
    benchmark::DoNotOptimize(energy);
  }
}
BENCHMARK(BM_FdtdStepWithEnergy)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Homogenize(benchmark::State& state) {
  std::vector<double> f;
  for (int i = 0; i <= 200; ++i) f.push_back(200e9 + 1e9 * i);
  const em::AdlStack stack;
  for (auto _ : state) benchmark::DoNotOptimize(em::homogenize_dummy_stack(stack, f, 0.3));
}
BENCHMARK(BM_Homogenize);

void BM_NearToFar(benchmark::State& state) {
  ntff::SurfaceDft s;
  s.cell_size = 5e-6;
  s.frequencies = {290e9};
  const int n = int(state.range(0));
  for (int a = 0; a < 3; ++a)
    for (int side = 0; side < 2; ++side) {
      auto& f = s.faces[std::size_t(2 * a + side)];
      f.axis = a;
      f.side = side ? 1 : -1;
      f.plane = (side ? 0.5 : -0.5) * n * s.cell_size;
      f.b0 = f.c0 = -0.5 * n * s.cell_size;
      f.nu = f.nv = n;
    }
  s.allocate();
  for (auto& f : s.faces)
    for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] = ntff::cfloat(float(i % 7), float(i % 3));
  const auto grid = ntff::AngularGrid::uniform(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(ntff::near_to_far(s, 0, grid));
}
BENCHMARK(BM_NearToFar)->Arg(120)->Unit(benchmark::kMillisecond);

}  // namespace
