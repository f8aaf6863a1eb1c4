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
#include "aocsim/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"
#include "aocsim/geometry.hpp"
#include "aocsim/sparams.hpp"
#include "aocsim/voxel_grid.hpp"
#include "json.hpp"

namespace aocsim::pipeline {

using nlohmann::ordered_json;

namespace {

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::out) {
  fs::create_directories(p.parent_path().empty() ? fs::path(".") : p.parent_path());
  std::ofstream out(p, mode);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read " + p.string());
  return in;
}

void emit(const Log& log, const std::string& msg) {
  if (log) log(msg);
}

void write_medium_csv(std::ostream& out, const HomogenizeOutput& h, em::ModeKind mode) {
  out << "frequency_hz,re_k_eff,im_k_eff,re_eps_eff,im_eps_eff\n";
  char line[256];
  for (const auto& p : h.result.points) {
    const auto& m = p.mode(mode);
    std::snprintf(line, sizeof line, "%.6f,%.12e,%.12e,%.12e,%.12e\n", p.frequency_hz, m.k_eff.real(),
                  m.k_eff.imag(), m.eps_eff.real(), m.eps_eff.imag());
    out << line;
  }
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : c.echo()) j[k] = v;
  return j;
}

ordered_json stack_assumptions(const RunConfig& c) {
  const auto s = c.solver_stack();
  ordered_json j;
  j["substrate_thickness_um"] = s.substrate_thickness * 1e6;
  j["substrate_permittivity"] = s.substrate.relative_permittivity;
  j["substrate_conductivity_s_per_m"] = s.substrate.conductivity;
  j["beol_thickness_um"] = s.beol_thickness * 1e6;
  j["beol_medium"] = c.beol_effective ? "effective" : "plain";
  j["beol_permittivity"] = s.beol_permittivity;
  j["beol_conductivity_s_per_m"] = s.beol_conductivity;
  j["passivation_thickness_um"] = s.passivation_thickness * 1e6;
  j["passivation_permittivity"] = s.passivation_permittivity;
  j["metal_model"] = s.metal_model == geom::MetalModel::pec ? "pec" : "sheet";
  j["dummy_fill"] = {{"layer_period_um", c.adl.layer_period_dz * 1e6},
                     {"patch_period_um", c.adl.patch_period * 1e6},
                     {"patch_gap_um", c.adl.patch_gap * 1e6},
                     {"layer_count", c.adl.layer_count},
                     {"host_permittivity", c.adl.host.relative_permittivity}};
  return j;
}

void write_json(const fs::path& p, const ordered_json& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

analysis::cdouble interpolate(const std::vector<double>& f, const std::vector<analysis::cdouble>& y, double x) {
  if (f.empty()) throw DomainError("cannot interpolate an empty spectrum");
  if (x <= f.front()) return y.front();
  if (x >= f.back()) return y.back();
  const auto it = std::upper_bound(f.begin(), f.end(), x);
  const std::size_t i = std::size_t(it - f.begin());
  const double t = (x - f[i - 1]) / (f[i] - f[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

}  // namespace

// ------------------------------------------------------------------------

HomogenizeOutput homogenize(const RunConfig& config, const fs::path& out_dir) {
  HomogenizeOutput h;
  h.frequencies = config.sweep.frequencies();
  h.result = em::homogenize_dummy_stack(config.adl, h.frequencies, config.sweep.theta, config.sweep.convention);
  h.exported = em::export_for_solver(config.adl, config.sweep.export_frequency_hz);
  {
    auto out = open_out(out_dir / "homogenize.csv");
    write_medium_csv(out, h, em::ModeKind::te);
  }
  {
    auto out = open_out(out_dir / "homogenize_tm.csv");
    write_medium_csv(out, h, em::ModeKind::tm);
  }
  ordered_json j;
  j["command"] = "homogenize";
  j["theta_deg"] = config.sweep.theta * 180.0 / constants::pi;
  j["k_rho_convention"] =
      config.sweep.convention == em::KRhoConvention::paper_literal ? "literal" : "conventional";
  j["exported_frequency_hz"] = config.sweep.export_frequency_hz;
  j["exported_permittivity"] = h.exported.relative_permittivity;
  j["exported_conductivity_s_per_m"] = h.exported.conductivity;
  ordered_json disc = ordered_json::array();
  for (const auto& d : h.result.discontinuities)
    disc.push_back({{"frequency_hz", h.frequencies[d.index]}, {"mode", em::to_string(d.mode)}, {"jump", d.jump}});
  j["discontinuities"] = disc;
  write_json(out_dir / "homogenize_manifest.json", j);
  return h;
}

GeometryOutput build_geometry(const RunConfig& config, int stage, const fs::path& out_dir, bool write_voxels) {
  GeometryOutput g;
  g.layout = geom::stage_geometry(geom::StagePreset(stage), config.params);
  {
    auto out = open_out(out_dir / "layout.txt");
    out << geom::format_layout(g.layout);
  }
  if (write_voxels) {
    geom::RasterOptions ro;
    ro.absorber_cells = config.sim.absorber.cells;
    ro.memory_budget_bytes = config.memory_budget_bytes;
    g.grid = geom::rasterize(g.layout, config.solver_stack(), config.cell_size(), ro);
    auto out = open_out(out_dir / "voxels.bin", std::ios::out | std::ios::binary);
    geom::write_voxel_grid(out, *g.grid);
  }
  return g;
}

// ------------------------------------------------------------------------

void write_far_field_csv(std::ostream& out, const std::vector<ntff::FarFieldSolution>& solutions) {
  out << "frequency_hz,theta_deg,phi_deg,directivity_dbi,re_etheta,im_etheta,re_ephi,im_ephi\n";
  char line[320];
  for (const auto& s : solutions) {
    for (std::size_t t = 0; t < s.grid.theta_deg.size(); ++t)
      for (std::size_t p = 0; p < s.grid.phi_deg.size(); ++p) {
        const std::size_t i = s.index(t, p);
        const double dbi = 10.0 * std::log10(std::max(s.directivity[i], 1e-30));
        std::snprintf(line, sizeof line, "%.6f,%.4f,%.4f,%.6f,%.9e,%.9e,%.9e,%.9e\n", s.frequency_hz,
                      s.grid.theta_deg[t], s.grid.phi_deg[p], dbi, s.e_theta[i].real(), s.e_theta[i].imag(),
                      s.e_phi[i].real(), s.e_phi[i].imag());
        out << line;
      }
  }
}

void write_efficiency_csv(std::ostream& out, const std::vector<ntff::FarFieldSolution>& solutions) {
  out << "frequency_hz,radiated_w,pattern_w,accepted_w,efficiency\n";
  char line[256];
  for (const auto& s : solutions) {
    std::snprintf(line, sizeof line, "%.6f,%.9e,%.9e,%.9e,%.9f\n", s.frequency_hz, s.surface_power,
                  s.radiated_power, s.accepted_power, s.efficiency());
    out << line;
  }
}

StageOutcome run_stage(const RunConfig& config, int stage, const fs::path& out_dir, const Log& log) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto geo = build_geometry(config, stage, out_dir, false);
  const auto stack = config.solver_stack();
  geom::RasterOptions ro;
  ro.absorber_cells = config.sim.absorber.cells;
  ro.memory_budget_bytes = config.memory_budget_bytes;
  const auto grid = geom::rasterize(geo.layout, stack, config.cell_size(), ro);
  const auto sim = config.simulation();
  emit(log, "stage " + std::to_string(stage) + ": grid " + std::to_string(grid.dims[0]) + "x" +
                std::to_string(grid.dims[1]) + "x" + std::to_string(grid.dims[2]) + ", BEOL eps_r " +
                fmt("%.3f", stack.beol_permittivity));
  long last_report = 0;
  const auto result = fdtd::run(grid, sim, [&](long step, double energy) {
    if (step - last_report >= 2000) {
      last_report = step;
      emit(log, "  step " + std::to_string(step) + " energy " + fmt("%.3e", energy));
    }
  });

  // S11 on the analysis grid.
  const auto fs11 = config.s11_frequencies();
  const auto s11 = sparams::extract_s11(result.port, fs11);
  {
    auto out = open_out(out_dir / kTouchstone);
    sparams::write_touchstone(out, {sim.port_reference_impedance, fs11, s11});
  }

  // Far field and efficiency on the DFT grid.
  const auto ps = sparams::port_spectrum(result.port, sim.dft_frequencies);
  const auto angles = ntff::AngularGrid::uniform(config.analysis.pattern_step_deg);
  std::vector<ntff::FarFieldSolution> ff;
  for (std::size_t i = 0; i < sim.dft_frequencies.size(); ++i) {
    ff.push_back(ntff::near_to_far(result.surface, i, angles));
    ff.back().accepted_power = ps.accepted_power(i);
  }
  {
    auto out = open_out(out_dir / kFarField);
    write_far_field_csv(out, ff);
  }
  {
    auto out = open_out(out_dir / kEfficiency);
    write_efficiency_csv(out, ff);
  }

  StageOutcome o;
  o.stage = stage;
  o.dims = grid.dims;
  o.stats = result.stats;
  o.beol_permittivity = stack.beol_permittivity;
  o.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto metrics = analyze(config, out_dir);
  ordered_json j;
  j["command"] = "run";
  j["stage"] = stage;
  j["mesh"] = to_string(config.mesh);
  j["cell_size_um"] = config.cell_size() * 1e6;
  j["grid_dims"] = grid.dims;
  j["dt_s"] = result.stats.dt;
  j["steps"] = result.stats.steps;
  j["energy_decay_level"] = result.stats.decay_level;
  j["energy_decayed"] = result.stats.decayed;
  j["peak_energy_j"] = result.stats.peak_energy;
  j["solver_wall_seconds"] = result.stats.wall_seconds;
  j["wall_seconds"] = o.stats.wall_seconds;
  j["threads"] = sim.threads;
  j["deterministic"] = config.deterministic;
  j["warnings"] = result.stats.warnings;
  j["bandwidth_hz"] = metrics.bandwidth.absolute_bw;
  j["fractional_bandwidth"] = metrics.bandwidth.fractional_bw;
  j["directivity_at_carrier_dbi"] = metrics.directivity_at_carrier_dbi;
  if (metrics.efficiency_peak) {
    j["efficiency_peak_hz"] = metrics.efficiency_peak->frequency_hz;
    j["efficiency_peak"] = metrics.efficiency_peak->value;
  }
  j["efficiency_notes"] = metrics.notes;
  if (!metrics.notes.empty()) j["stack_assumptions"] = stack_assumptions(config);
  j["config"] = config_json(config);
  write_json(out_dir / kManifest, j);
  emit(log, "stage " + std::to_string(stage) + ": " + std::to_string(result.stats.steps) + " steps, " +
                fmt("%.0f s", o.stats.wall_seconds) + ", -10 dB bandwidth " +
                fmt("%.1f GHz", metrics.bandwidth.absolute_bw / 1e9) + ", D(carrier) " +
                fmt("%.2f dBi", metrics.directivity_at_carrier_dbi));
  return o;
}

// ------------------------------------------------------------------------

Metrics analyze(const RunConfig& config, const fs::path& dir) {
  Metrics m;
  {
    auto in = open_in(dir / kTouchstone);
    const auto ts = sparams::read_touchstone(in);
    m.s11.frequencies = ts.frequencies;
    m.s11.s11 = ts.s11;
    for (const auto& s : ts.s11) {
      // An exact open is reported as a huge impedance instead of aborting.
      m.s11.z_in.push_back(s == analysis::cdouble(1.0, 0.0) ? analysis::cdouble(1e300, 0.0)
                                                             : sparams::input_impedance(s, ts.reference_impedance));
    }
  }
  m.s11.validate();

  // efficiency.csv fixes the far-field frequency grid.
  {
    auto in = open_in(dir / kEfficiency);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c = split_csv(line);
      if (c.size() != 5) throw ConfigError("malformed efficiency.csv line: " + line);
      m.far_field.frequencies.push_back(std::stod(c[0]));
      m.far_field.efficiency.push_back(std::stod(c[4]));
    }
  }
  const std::size_t nf = m.far_field.frequencies.size();
  m.far_field.peak_directivity_dbi.assign(nf, -1e300);
  struct CutRow {
    double theta, phi, dbi;
  };
  std::vector<CutRow> cuts;
  std::size_t carrier = 0;
  for (std::size_t i = 1; i < nf; ++i)
    if (std::abs(m.far_field.frequencies[i] - config.analysis.pattern_frequency_hz) <
        std::abs(m.far_field.frequencies[carrier] - config.analysis.pattern_frequency_hz))
      carrier = i;
  {
    auto in = open_in(dir / kFarField);
    std::string line;
    std::getline(in, line);
    std::size_t fi = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c = split_csv(line);
      if (c.size() != 8) throw ConfigError("malformed farfield.csv line: " + line);
      const double f = std::stod(c[0]);
      while (fi < nf && std::abs(m.far_field.frequencies[fi] - f) > 1e-3) ++fi;
      if (fi == nf) throw ConfigError("farfield.csv frequency not present in efficiency.csv: " + c[0]);
      const double dbi = std::stod(c[3]);
      m.far_field.peak_directivity_dbi[fi] = std::max(m.far_field.peak_directivity_dbi[fi], dbi);
      const double phi = std::stod(c[2]);
      if (fi == carrier && (phi == 0.0 || phi == 90.0)) cuts.push_back({std::stod(c[1]), phi, dbi});
    }
  }
  for (double f : m.far_field.frequencies) m.far_field.s11.push_back(interpolate(m.s11.frequencies, m.s11.s11, f));
  m.far_field.validate();

  m.bandwidth = analysis::impedance_bandwidth(m.s11, config.analysis.threshold_db, config.analysis.reference_hz);
  if (nf > 0) m.directivity_at_carrier_dbi = m.far_field.peak_directivity_dbi[carrier];
  if (nf >= 10) m.efficiency_peak = analysis::efficiency_peak(m.far_field);
  const auto smith = analysis::smith_export(m.s11);
  m.smith_sign_changes = analysis::imag_sign_changes(smith);

  if (m.efficiency_peak) {
    const auto& p = *m.efficiency_peak;
    if (p.edge || p.plateau) m.notes.push_back("efficiency maximum is not interior to the swept band");
    if (p.frequency_hz < 255e9 || p.frequency_hz > 295e9)
      m.notes.push_back("efficiency peak at " + fmt("%.1f", p.frequency_hz / 1e9) +
                        " GHz lies outside the expected 255-295 GHz window");
    if (p.value < 0.30 || p.value > 0.55)
      m.notes.push_back("efficiency peak value " + fmt("%.3f", p.value) +
                        " lies outside the expected 0.30-0.55 range");
    if (!p.decreases_after) m.notes.push_back("efficiency does not decrease monotonically above the peak");
  }
  for (double e : m.far_field.efficiency)
    if (!(e < 1.0)) m.notes.push_back("efficiency reaches " + fmt("%.4f", e) + " (>= 1) despite substrate loss");

  {
    auto out = open_out(dir / "smith.csv");
    out << "frequency_hz,re_gamma,im_gamma\n";
    char line[160];
    for (const auto& p : smith) {
      std::snprintf(line, sizeof line, "%.6f,%.12e,%.12e\n", p.frequency_hz, p.re, p.im);
      out << line;
    }
  }
  {
    auto out = open_out(dir / "pattern_cuts.csv");
    out << "frequency_hz,theta_deg,phi_deg,directivity_dbi\n";
    char line[160];
    for (const auto& r : cuts) {
      std::snprintf(line, sizeof line, "%.6f,%.4f,%.4f,%.6f\n", m.far_field.frequencies[carrier], r.theta, r.phi,
                    r.dbi);
      out << line;
    }
  }
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("threshold_db", fmt("%.2f", config.analysis.threshold_db));
  kv.emplace_back("band_count", std::to_string(m.bandwidth.bands.size()));
  for (std::size_t b = 0; b < m.bandwidth.bands.size(); ++b) {
    kv.emplace_back("band" + std::to_string(b) + "_lo_ghz", fmt("%.4f", m.bandwidth.bands[b].lo_hz / 1e9));
    kv.emplace_back("band" + std::to_string(b) + "_hi_ghz", fmt("%.4f", m.bandwidth.bands[b].hi_hz / 1e9));
  }
  kv.emplace_back("widest_band", std::to_string(m.bandwidth.widest));
  kv.emplace_back("bandwidth_ghz", fmt("%.4f", m.bandwidth.absolute_bw / 1e9));
  kv.emplace_back("fractional_bandwidth", fmt("%.6f", m.bandwidth.fractional_bw));
  kv.emplace_back("directivity_at_carrier_dbi", fmt("%.4f", m.directivity_at_carrier_dbi));
  if (m.efficiency_peak) {
    kv.emplace_back("efficiency_peak_ghz", fmt("%.4f", m.efficiency_peak->frequency_hz / 1e9));
    kv.emplace_back("efficiency_peak", fmt("%.6f", m.efficiency_peak->value));
    kv.emplace_back("efficiency_plateau", m.efficiency_peak->plateau ? "true" : "false");
    kv.emplace_back("efficiency_edge", m.efficiency_peak->edge ? "true" : "false");
    kv.emplace_back("efficiency_decreases_after_peak", m.efficiency_peak->decreases_after ? "true" : "false");
  }
  kv.emplace_back("smith_imag_sign_changes", std::to_string(m.smith_sign_changes));
  {
    auto out = open_out(dir / "metrics.kv");
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
  }
  {
    auto out = open_out(dir / "metrics.txt");
    out << "Impedance bandwidth (|S11| < " << fmt("%.1f", config.analysis.threshold_db) << " dB)\n";
    if (m.bandwidth.empty()) out << "  no band below threshold\n";
    for (std::size_t b = 0; b < m.bandwidth.bands.size(); ++b)
      out << "  " << fmt("%.2f", m.bandwidth.bands[b].lo_hz / 1e9) << " - "
          << fmt("%.2f", m.bandwidth.bands[b].hi_hz / 1e9) << " GHz"
          << (int(b) == m.bandwidth.widest ? "  (widest)" : "") << '\n';
    out << "  absolute " << fmt("%.2f", m.bandwidth.absolute_bw / 1e9) << " GHz, fractional "
        << fmt("%.1f", 100.0 * m.bandwidth.fractional_bw) << " % of "
        << fmt("%.0f", config.analysis.reference_hz / 1e9) << " GHz\n";
    out << "Peak directivity at " << fmt("%.0f", m.far_field.frequencies.empty() ? 0.0 : m.far_field.frequencies[carrier] / 1e9)
        << " GHz: " << fmt("%.2f", m.directivity_at_carrier_dbi) << " dBi\n";
    if (m.efficiency_peak)
      out << "Radiation efficiency peak: " << fmt("%.3f", m.efficiency_peak->value) << " at "
          << fmt("%.1f", m.efficiency_peak->frequency_hz / 1e9) << " GHz\n";
    out << "Smith locus Im(Gamma) sign changes: " << m.smith_sign_changes << '\n';
    for (const auto& n : m.notes) out << "NOTE: " << n << '\n';
  }
  return m;
}

// ------------------------------------------------------------------------

std::map<int, analysis::StageMetrics> table_fixture() {
  return {{1, {4.7, 0.3, 0.6, 22.0}}, {2, {7.2, 0.3, 0.6, 47.0}}, {3, {7.0, 0.24, 0.42, 92.0}},
          {4, {7.0, 0.24, 0.42, 114.0}}};
}

SweepOutput sweep_stages(const RunConfig& config, const fs::path& out_dir, bool fixture, const Log& log) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  SweepOutput out;
  ordered_json j;
  j["command"] = "sweep-stages";
  j["fixture"] = fixture;
  j["mesh"] = to_string(config.mesh);
  j["cell_size_um"] = config.cell_size() * 1e6;
  ordered_json stages = ordered_json::array();
  auto write_manifest = [&] {
    j["stages"] = stages;
    j["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    j["config"] = config_json(config);
    write_json(out_dir / kManifest, j);
  };
  if (fixture) {
    const auto all = table_fixture();
    for (int s : config.stages) out.stages[s] = all.at(s);
  } else {
    for (int s : config.stages) {
      const fs::path dir = out_dir / ("stage" + std::to_string(s));
      try {
        const auto o = run_stage(config, s, dir, log);
        const auto m = analyze(config, dir);
        const auto fp = geom::stage_footprint(geom::StagePreset(s));
        analysis::StageMetrics sm;
        sm.peak_directivity_db = m.directivity_at_carrier_dbi;
        sm.length_mm = fp.length * 1e3;
        sm.width_mm = fp.width * 1e3;
        sm.bandwidth_ghz = m.bandwidth.absolute_bw / 1e9;
        out.stages[s] = sm;
        stages.push_back({{"stage", s},
                          {"directory", dir.filename().string()},
                          {"wall_seconds", o.stats.wall_seconds},
                          {"steps", o.stats.steps},
                          {"bandwidth_ghz", sm.bandwidth_ghz},
                          {"fractional_bandwidth", m.bandwidth.fractional_bw},
                          {"directivity_dbi", sm.peak_directivity_db}});
      } catch (const std::exception& e) {
        j["failed_stage"] = s;
        j["error"] = e.what();
        write_manifest();
        throw;
      }
    }
  }
  out.report = analysis::stage_report(out.stages);
  {
    auto f = open_out(out_dir / "stage_report.txt");
    f << out.report.text;
  }
  j["trend_violation"] = out.report.trend_violation;
  write_manifest();
  return out;
}

validation::ValidationReport validate(const RunConfig& config, const fs::path& out_dir, const Log& log) {
  const auto opts = config.validation_options();
  validation::ValidationReport rep;
  using ItemFn = validation::ValidationItem (*)(const validation::ValidationOptions&);
  for (ItemFn fn : {&validation::adl_item, &validation::fresnel_item, &validation::absorber_item,
                    &validation::cavity_item, &validation::hertzian_item, &validation::half_wave_item}) {
    rep.items.push_back(fn(opts));
    const auto& it = rep.items.back();
    emit(log, std::string(it.passed ? "PASS " : "FAIL ") + it.name + " measured=" + fmt("%.6g", it.measured) +
                  (it.detail.empty() ? "" : " " + it.detail));
  }
  auto f = open_out(out_dir / "validation.txt");
  f << rep.format();
  return rep;
}

}  // namespace aocsim::pipeline
