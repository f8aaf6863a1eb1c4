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
#include "aocsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "aocsim/constants.hpp"
#include "aocsim/error.hpp"

namespace aocsim {

namespace pt = boost::property_tree;
using constants::pi;

std::string to_string(MeshPreset mesh) { return mesh == MeshPreset::coarse ? "coarse" : "fine"; }

MeshPreset parse_mesh(const std::string& name) {
  if (name == "coarse") return MeshPreset::coarse;
  if (name == "fine") return MeshPreset::fine;
  throw ConfigError("mesh preset must be 'coarse' or 'fine', got '" + name + "'");
}

namespace {

std::vector<double> linear_range(double start, double stop, double step, const char* what) {
  if (!(step > 0.0) || !(stop >= start)) throw ConfigError(std::string(what) + ": invalid frequency range");
  std::vector<double> f;
  const long n = std::lround((stop - start) / step);
  for (long i = 0; i <= n; ++i) f.push_back(start + double(i) * step);
  return f;
}

std::string num(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.10g", v);
  return b;
}

// Binds a file key to a field with a unit scale; text = value / scale.
struct Key {
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (d != std::floor(d)) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return long(d);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

template <class Ptr>
Key real(std::string name, Ptr field, double scale) {
  return {name, [field, scale](const RunConfig& c) { return num(field(const_cast<RunConfig&>(c)) / scale); },
          [field, scale, name](RunConfig& c, const std::string& v) { field(c) = parse_double(name, v) * scale; }};
}

template <class Ptr>
Key integer(std::string name, Ptr field) {
  return {name, [field](const RunConfig& c) { return std::to_string(field(const_cast<RunConfig&>(c))); },
          [field, name](RunConfig& c, const std::string& v) {
            field(c) = static_cast<std::remove_reference_t<decltype(field(c))>>(parse_long(name, v));
          }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    constexpr double um = 1e-6, ghz = 1e9;
    std::vector<Key> v;
    // [antenna]
    v.push_back(integer("antenna.stage", [](RunConfig& c) -> int& { return c.stage; }));
    v.push_back({"antenna.stages",
                 [](const RunConfig& c) {
                   std::string s;
                   for (int st : c.stages) s += (s.empty() ? "" : ",") + std::to_string(st);
                   return s;
                 },
                 [](RunConfig& c, const std::string& val) {
                   c.stages.clear();
                   std::stringstream ss(val);
                   std::string item;
                   while (std::getline(ss, item, ','))
                     c.stages.push_back(int(parse_long("antenna.stages", item)));
                 }});
    for (auto label : geom::AntennaParams::labels()) {
      const std::string l(label);
      v.push_back({"antenna." + l + "_um", [l](const RunConfig& c) { return num(c.params.get(l) / um); },
                   [l](RunConfig& c, const std::string& val) {
                     c.params.set(l, parse_double("antenna." + l + "_um", val) * um);
                   }});
    }
    // [chip]
    v.push_back(real("chip.substrate_thickness_um", [](RunConfig& c) -> double& { return c.chip.substrate_thickness; }, um));
    v.push_back(real("chip.substrate_permittivity", [](RunConfig& c) -> double& { return c.chip.substrate.relative_permittivity; }, 1.0));
    v.push_back(real("chip.substrate_conductivity", [](RunConfig& c) -> double& { return c.chip.substrate.conductivity; }, 1.0));
    v.push_back(real("chip.beol_thickness_um", [](RunConfig& c) -> double& { return c.chip.beol_thickness; }, um));
    v.push_back({"chip.beol_medium", [](const RunConfig& c) { return std::string(c.beol_effective ? "effective" : "plain"); },
                 [](RunConfig& c, const std::string& val) {
                   if (val == "effective") c.beol_effective = true;
                   else if (val == "plain") c.beol_effective = false;
                   else throw ConfigError("chip.beol_medium must be 'effective' or 'plain'");
                 }});
    v.push_back(real("chip.beol_permittivity", [](RunConfig& c) -> double& { return c.chip.beol_permittivity; }, 1.0));
    v.push_back(real("chip.beol_conductivity", [](RunConfig& c) -> double& { return c.chip.beol_conductivity; }, 1.0));
    v.push_back(real("chip.passivation_thickness_um", [](RunConfig& c) -> double& { return c.chip.passivation_thickness; }, um));
    v.push_back(real("chip.passivation_permittivity", [](RunConfig& c) -> double& { return c.chip.passivation_permittivity; }, 1.0));
    v.push_back(real("chip.air_margin_um", [](RunConfig& c) -> double& { return c.chip.air_margin; }, um));
    v.push_back(real("chip.chip_margin_um", [](RunConfig& c) -> double& { return c.chip.chip_margin; }, um));
    v.push_back({"chip.metal_model",
                 [](const RunConfig& c) { return std::string(c.chip.metal_model == geom::MetalModel::pec ? "pec" : "sheet"); },
                 [](RunConfig& c, const std::string& val) {
                   if (val == "pec") c.chip.metal_model = geom::MetalModel::pec;
                   else if (val == "sheet") c.chip.metal_model = geom::MetalModel::sheet;
                   else throw ConfigError("chip.metal_model must be 'pec' or 'sheet'");
                 }});
    v.push_back(real("chip.sheet_conductance", [](RunConfig& c) -> double& { return c.chip.sheet_conductance; }, 1.0));
    // [adl]
    v.push_back(real("adl.layer_period_um", [](RunConfig& c) -> double& { return c.adl.layer_period_dz; }, um));
    v.push_back(real("adl.patch_period_um", [](RunConfig& c) -> double& { return c.adl.patch_period; }, um));
    v.push_back(real("adl.patch_gap_um", [](RunConfig& c) -> double& { return c.adl.patch_gap; }, um));
    v.push_back(integer("adl.layer_count", [](RunConfig& c) -> int& { return c.adl.layer_count; }));
    v.push_back(real("adl.host_permittivity", [](RunConfig& c) -> double& { return c.adl.host.relative_permittivity; }, 1.0));
    v.push_back(real("adl.host_conductivity", [](RunConfig& c) -> double& { return c.adl.host.conductivity; }, 1.0));
    v.push_back(real("adl.theta_deg", [](RunConfig& c) -> double& { return c.sweep.theta; }, pi / 180.0));
    v.push_back({"adl.k_rho_convention",
                 [](const RunConfig& c) {
                   return std::string(c.sweep.convention == em::KRhoConvention::paper_literal ? "literal" : "conventional");
                 },
                 [](RunConfig& c, const std::string& val) {
                   if (val == "literal") c.sweep.convention = em::KRhoConvention::paper_literal;
                   else if (val == "conventional") c.sweep.convention = em::KRhoConvention::conventional;
                   else throw ConfigError("adl.k_rho_convention must be 'literal' or 'conventional'");
                 }});
    v.push_back(real("adl.sweep_start_ghz", [](RunConfig& c) -> double& { return c.sweep.start_hz; }, ghz));
    v.push_back(real("adl.sweep_stop_ghz", [](RunConfig& c) -> double& { return c.sweep.stop_hz; }, ghz));
    v.push_back(real("adl.sweep_step_ghz", [](RunConfig& c) -> double& { return c.sweep.step_hz; }, ghz));
    v.push_back(real("adl.export_frequency_ghz", [](RunConfig& c) -> double& { return c.sweep.export_frequency_hz; }, ghz));
    // [mesh]
    v.push_back({"mesh.preset", [](const RunConfig& c) { return to_string(c.mesh); },
                 [](RunConfig& c, const std::string& val) { c.mesh = parse_mesh(val); }});
    v.push_back(real("mesh.cell_size_um", [](RunConfig& c) -> double& { return c.cell_size_override; }, um));
    v.push_back(real("mesh.memory_budget_gb", [](RunConfig& c) -> double& { return c.memory_budget_bytes; }, 1e9));
    // [solver]
    v.push_back(integer("solver.time_steps", [](RunConfig& c) -> long& { return c.sim.time_steps; }));
    v.push_back(real("solver.cfl", [](RunConfig& c) -> double& { return c.sim.cfl; }, 1.0));
    v.push_back(real("solver.source_center_ghz", [](RunConfig& c) -> double& { return c.sim.source.center_hz; }, ghz));
    v.push_back(real("solver.source_halfwidth_ghz", [](RunConfig& c) -> double& { return c.sim.source.halfwidth_hz; }, ghz));
    v.push_back(real("solver.reference_impedance", [](RunConfig& c) -> double& { return c.sim.port_reference_impedance; }, 1.0));
    v.push_back(integer("solver.absorber_cells", [](RunConfig& c) -> int& { return c.sim.absorber.cells; }));
    v.push_back(real("solver.absorber_order", [](RunConfig& c) -> double& { return c.sim.absorber.order; }, 1.0));
    v.push_back(real("solver.absorber_sigma_scale", [](RunConfig& c) -> double& { return c.sim.absorber.sigma_scale; }, 1.0));
    v.push_back(real("solver.absorber_alpha_ghz", [](RunConfig& c) -> double& { return c.sim.absorber.alpha_hz; }, ghz));
    v.push_back(real("solver.dft_start_ghz", [](RunConfig& c) -> double& { return c.dft_start_hz; }, ghz));
    v.push_back(real("solver.dft_stop_ghz", [](RunConfig& c) -> double& { return c.dft_stop_hz; }, ghz));
    v.push_back(real("solver.dft_step_ghz", [](RunConfig& c) -> double& { return c.dft_step_hz; }, ghz));
    v.push_back(integer("solver.dft_stride", [](RunConfig& c) -> int& { return c.sim.dft_stride; }));
    v.push_back(integer("solver.ntff_inset", [](RunConfig& c) -> int& { return c.sim.ntff_inset; }));
    v.push_back(real("solver.decay_threshold", [](RunConfig& c) -> double& { return c.sim.decay_threshold; }, 1.0));
    v.push_back(integer("solver.energy_interval", [](RunConfig& c) -> int& { return c.sim.energy_interval; }));
    v.push_back(integer("solver.threads", [](RunConfig& c) -> int& { return c.sim.threads; }));
    // [analysis]
    v.push_back(real("analysis.threshold_db", [](RunConfig& c) -> double& { return c.analysis.threshold_db; }, 1.0));
    v.push_back(real("analysis.reference_ghz", [](RunConfig& c) -> double& { return c.analysis.reference_hz; }, ghz));
    v.push_back(real("analysis.s11_step_ghz", [](RunConfig& c) -> double& { return c.analysis.s11_step_hz; }, ghz));
    v.push_back(real("analysis.pattern_step_deg", [](RunConfig& c) -> double& { return c.analysis.pattern_step_deg; }, 1.0));
    v.push_back(real("analysis.pattern_frequency_ghz", [](RunConfig& c) -> double& { return c.analysis.pattern_frequency_hz; }, ghz));
    // [output]
    v.push_back({"output.dir", [](const RunConfig& c) { return c.output_dir; },
                 [](RunConfig& c, const std::string& val) { c.output_dir = val; }});
    v.push_back({"output.deterministic", [](const RunConfig& c) { return std::string(c.deterministic ? "true" : "false"); },
                 [](RunConfig& c, const std::string& val) { c.deterministic = parse_bool("output.deterministic", val); }});
    return v;
  }();
  return k;
}

}  // namespace

std::vector<double> AdlSweep::frequencies() const { return linear_range(start_hz, stop_hz, step_hz, "adl sweep"); }

fdtd::SimulationConfig RunConfig::default_simulation() {
  fdtd::SimulationConfig s;
  s.time_steps = 30000;
  s.cfl = 0.99;
  return s;
}

double RunConfig::cell_size() const {
  if (cell_size_override > 0.0) return cell_size_override;
  return mesh == MeshPreset::coarse ? 5e-6 : 2.5e-6;
}

std::vector<double> RunConfig::dft_frequencies() const {
  return linear_range(dft_start_hz, dft_stop_hz, dft_step_hz, "solver DFT");
}

std::vector<double> RunConfig::s11_frequencies() const {
  return linear_range(dft_start_hz, dft_stop_hz, analysis.s11_step_hz, "analysis S11");
}

geom::ChipStack RunConfig::solver_stack() const {
  geom::ChipStack s = chip;
  if (beol_effective) {
    const auto m = em::export_for_solver(adl, sweep.export_frequency_hz);
    s.beol_permittivity = m.relative_permittivity;
    s.beol_conductivity = m.conductivity;
  }
  return s;
}

fdtd::SimulationConfig RunConfig::simulation() const {
  fdtd::SimulationConfig s = sim;
  s.dft_frequencies = dft_frequencies();
  if (deterministic) s.threads = 1;
  return s;
}

validation::ValidationOptions RunConfig::validation_options() const {
  validation::ValidationOptions v;
  v.cell_size = cell_size();
  v.cfl = sim.cfl;
  v.absorber = sim.absorber;
  v.threads = deterministic ? 1 : sim.threads;
  v.f_min = dft_start_hz;
  v.f_max = dft_stop_hz;
  v.f_step = dft_step_hz;
  return v;
}

void RunConfig::validate() const {
  geom::StagePreset{stage};
  if (stages.empty()) throw ConfigError("antenna.stages must list at least one stage");
  for (int s : stages) geom::StagePreset{s};
  for (std::size_t i = 1; i < stages.size(); ++i)
    if (stages[i] <= stages[i - 1]) throw ConfigError("antenna.stages must be strictly increasing");
  chip.validate();
  adl.validate();
  if (!(cell_size() > 0.0)) throw ConfigError("cell size must be positive");
  if (!(memory_budget_bytes > 0.0)) throw ConfigError("memory budget must be positive");
  if (!(sweep.theta >= 0.0 && sweep.theta < pi / 2)) throw ConfigError("adl.theta_deg must lie in [0, 90)");
  if (!(sweep.export_frequency_hz > 0.0)) throw ConfigError("adl.export_frequency_ghz must be positive");
  sweep.frequencies();
  if (sim.absorber.cells < 0) throw ConfigError("solver.absorber_cells must be >= 0");
  if (!(analysis.pattern_step_deg > 0.0)) throw ConfigError("analysis.pattern_step_deg must be positive");
  if (!(analysis.reference_hz > 0.0)) throw ConfigError("analysis.reference_ghz must be positive");
  s11_frequencies();
  simulation().validate();
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) out.emplace_back(k.name, k.get(*this));
  return out;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  std::map<std::string, const Key*> index;
  for (const auto& k : keys()) index[k.name] = &k;
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config key outside a section: " + section);
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      const auto it = index.find(name);
      if (it == index.end()) throw ConfigError("unknown config key: " + name);
      it->second->set(cfg, value.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& config) {
  std::ostringstream os;
  std::string section;
  for (const auto& [name, value] : config.echo()) {
    const auto dot = name.find('.');
    const std::string sec = name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    os << name.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

}  // namespace aocsim
