// Copyright 2026 The gaugesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// gaugesim command-line driver.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gaugesim/config.h"
#include "gaugesim/errors.h"
#include "gaugesim/harness.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

const char* preset_summary(const std::string& name) {
  if (name == "fig1d") return "defect, N=11 open, f=0.2, mu=0, dt=0.2, 25 steps, site-resolved";
  if (name == "fig1e") return "defect, N=11 open, f=2.0, mu=0, dt=0.2, 25 steps, site-resolved";
  if (name == "fig2") return "half filling, N=8 periodic, mu=0.35, dt=0.3, 25 steps, f in {0.2,0.75,1.25,2.0}";
  if (name == "fig3") return "psi3, N=6 periodic, f=mu=2.5, compliant c, V in {0,6}, phi envelope";
  if (name == "extended_u1") return "psi3, N=8 periodic, f=mu=2.5, c=(-1)^i, V in {0,6}";
  if (name == "trotter_study") return "half filling, N=4 periodic, f=0.75, mu=0.35, dt in 0.05..1.0, t_f=10";
  if (name == "postselect_study") return "fig2 at f=0.75, ideal and noisy with postselection";
  return "";
}

bool looks_like_config_file(const std::string& arg) {
  return arg.ends_with(".json") || std::filesystem::is_regular_file(arg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaugesim: Z2 lattice gauge theory circuits, exact dynamics and experiment presets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gaugesim::software_version()));

  std::string target;
  std::string out_dir;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::string phi;
  bool exact_only = false;
  std::vector<double> f_grid;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run a preset or a gaugesim-config/1 file");
  run->add_option("preset", target, "preset name or config file")->required();
  auto* o_out = run->add_option("--out", out_dir, "output directory");
  auto* o_shots = run->add_option("--shots", shots, "shots per step");
  auto* o_seed = run->add_option("--seed", seed, "base seed");
  auto* o_dt = run->add_option("--dt", dt, "Trotter step in units of 1/J");
  auto* o_phi = run->add_option("--noise.phi", phi, "C-phase angle, or 'off'");
  run->add_flag("--exact-only", exact_only, "only run the exact-oracle variant");
  auto* o_f = run->add_option("--f-grid", f_grid, "comma-separated f values")->delimiter(',');
  run->add_flag("-q,--quiet", quiet, "no summary on stdout");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("config", validate_path, "config file")->required();

  auto* list = app.add_subcommand("list-presets", "list preset names");

  std::string dump_name;
  auto* dump = app.add_subcommand("dump-config", "print a preset as a config file");
  dump->add_option("preset", dump_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*list) {
      for (const auto& name : gaugesim::preset_names()) std::cout << name << "\t" << preset_summary(name) << "\n";
      return kExitOk;
    }
    if (*dump) {
      std::cout << gaugesim::config_to_json(gaugesim::preset_config(dump_name)).dump(2) << "\n";
      return kExitOk;
    }
    if (*validate) {
      const auto cfg = gaugesim::load_config_file(validate_path);
      std::cout << "ok: " << cfg.name << " (" << cfg.model.lattice.num_qubits() << " qubits)\n";
      return kExitOk;
    }

    gaugesim::PresetOverrides ov;
    if (*o_out) ov.out = out_dir;
    if (*o_shots) ov.shots = shots;
    if (*o_seed) ov.seed = seed;
    if (*o_dt) ov.dt = dt;
    if (*o_phi) {
      if (phi == "off") {
        ov.noise_off = true;
      } else {
        double v = 0.0;
        auto [p, ec] = std::from_chars(phi.data(), phi.data() + phi.size(), v);
        if (ec != std::errc() || p != phi.data() + phi.size()) {
          throw gaugesim::ConfigError("--noise.phi: expected a number or 'off'");
        }
        ov.phi = v;
      }
    }
    ov.exact_only = exact_only;
    if (*o_f) ov.f_grid = f_grid;

    gaugesim::ExperimentConfig cfg = looks_like_config_file(target) ? gaugesim::load_config_file(target)
                                                                    : gaugesim::preset_config(target);
    cfg = gaugesim::apply_overrides(std::move(cfg), ov);
    const auto result = gaugesim::run_config(cfg);
    if (!quiet) {
      std::cout << "wrote " << result.files.size() + 1 << " files to " << cfg.output_dir << " in "
                << result.wall_time_s << " s\n";
      if (result.trotter_slope) std::cout << "log-log slope on [0.05, 0.4]: " << *result.trotter_slope << "\n";
    }
    return kExitOk;
  } catch (const gaugesim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gaugesim::ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
