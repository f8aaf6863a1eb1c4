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
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aocsim/config.hpp"
#include "aocsim/error.hpp"
#include "aocsim/pipeline.hpp"

namespace {

int code(aocsim::ExitCode c) { return static_cast<int>(c); }

void log_line(const std::string& msg) { std::cerr << msg << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aocsim: sub-THz antenna-on-chip homogenization, geometry, FDTD and analysis"};
  app.require_subcommand(1);

  std::string config_path, mesh, out_dir;
  bool deterministic = false;
  app.add_option("--config", config_path, "INI run-config file (defaults apply when omitted)");
  app.add_option("--mesh", mesh, "Mesh preset")->check(CLI::IsMember({"coarse", "fine"}));
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--deterministic", deterministic, "Single-partition mode for bit-exact outputs");

  auto* homogenize = app.add_subcommand("homogenize", "Effective permittivity of the dummy-metal stack");
  auto* build = app.add_subcommand("build-geometry", "Layout (and optional voxel grid) for one stage");
  std::optional<int> stage;
  bool voxels = false;
  build->add_option("--stage", stage, "Design stage 1-4 (default: antenna.stage)");
  build->add_flag("--voxels", voxels, "Also write the binary voxel grid");
  auto* run = app.add_subcommand("run", "Full-wave simulation of one stage");
  run->add_option("--stage", stage, "Design stage 1-4 (default: antenna.stage)");
  auto* analyze = app.add_subcommand("analyze", "Metrics from Touchstone and far-field outputs");
  std::string analyze_dir;
  analyze->add_option("--dir", analyze_dir, "Directory holding run outputs (default: --out)");
  auto* sweep = app.add_subcommand("sweep-stages", "Run every configured stage and tabulate the comparison");
  bool fixture = false;
  std::string stage_list;
  sweep->add_flag("--fixture", fixture, "Inject the reference per-stage values instead of simulating");
  sweep->add_option("--stages", stage_list, "Comma-separated stage list (default: antenna.stages)");
  auto* validate = app.add_subcommand("validate", "Analytic-oracle validation suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(aocsim::ExitCode::config_error);
  }

  try {
    aocsim::RunConfig cfg = config_path.empty() ? aocsim::RunConfig{} : aocsim::load_config(config_path);
    if (!mesh.empty()) {
      cfg.mesh = aocsim::parse_mesh(mesh);
      cfg.cell_size_override = 0.0;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (deterministic) cfg.deterministic = true;
    if (stage) cfg.stage = *stage;
    if (!stage_list.empty()) {
      aocsim::RunConfig tmp = aocsim::parse_config("[antenna]\nstages = " + stage_list + "\n");
      cfg.stages = tmp.stages;
    }
    cfg.validate();
    const aocsim::pipeline::fs::path out = cfg.output_dir;

    if (homogenize->parsed()) {
      const auto h = aocsim::pipeline::homogenize(cfg, out);
      std::cout << "wrote " << (out / "homogenize.csv").string() << " (" << h.frequencies.size()
                << " frequencies); solver permittivity " << h.exported.relative_permittivity << '\n';
      for (const auto& d : h.result.discontinuities)
        std::cout << "WARNING: branch discontinuity near " << h.frequencies[d.index] / 1e9 << " GHz\n";
    } else if (build->parsed()) {
      const auto g = aocsim::pipeline::build_geometry(cfg, cfg.stage, out, voxels);
      std::cout << "wrote " << (out / "layout.txt").string() << " (" << g.layout.rects.size() << " rectangles)\n";
      if (g.grid) {
        std::cout << "wrote " << (out / "voxels.bin").string() << " (" << g.grid->dims[0] << "x" << g.grid->dims[1]
                  << "x" << g.grid->dims[2] << ")\n";
        for (const auto& w : g.grid->warnings) std::cout << "WARNING: " << w << '\n';
      }
    } else if (run->parsed()) {
      const auto o = aocsim::pipeline::run_stage(cfg, cfg.stage, out, log_line);
      for (const auto& w : o.stats.warnings) std::cout << "WARNING: " << w << '\n';
      std::cout << "wrote " << out.string() << '\n';
    } else if (analyze->parsed()) {
      const auto m = aocsim::pipeline::analyze(cfg, analyze_dir.empty() ? out : aocsim::pipeline::fs::path(analyze_dir));
      std::cout << "bandwidth " << m.bandwidth.absolute_bw / 1e9 << " GHz ("
                << 100.0 * m.bandwidth.fractional_bw << " %), directivity " << m.directivity_at_carrier_dbi
                << " dBi\n";
      for (const auto& n : m.notes) std::cout << "NOTE: " << n << '\n';
    } else if (sweep->parsed()) {
      const auto s = aocsim::pipeline::sweep_stages(cfg, out, fixture, log_line);
      std::cout << s.report.text;
    } else if (validate->parsed()) {
      const auto rep = aocsim::pipeline::validate(cfg, out, log_line);
      std::cout << rep.format();
      if (!rep.all_passed()) return code(aocsim::ExitCode::validation_failure);
    }
  } catch (const aocsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(aocsim::ExitCode::config_error);
  }
  return 0;
}
