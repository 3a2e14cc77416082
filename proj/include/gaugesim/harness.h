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

#ifndef GAUGESIM_HARNESS_H_
#define GAUGESIM_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaugesim/config.h"
#include "gaugesim/exact.h"
#include "gaugesim/measurement.h"

namespace gaugesim {

std::string_view software_version();

/// One fully resolved simulation point.
struct DynamicsSetup {
  LatticeSpec lattice{2, Boundary::kPeriodic};
  ModelParams params;
  ModelKind model = ModelKind::kZ2;
  ProductState initial;
};

DynamicsSetup make_setup(const ModelDocument& doc);

struct SimulationOptions {
  /// Shots per step; 0 disables sampling.
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  NoiseParams noise;
  int ensemble = 1;
  bool site_resolved = false;
};

/// Per-step observables for one variant, steps 0..n_steps. Statevector
/// results are named E, eta_z2, eta_u1 and n_q<k>; sampled results E_shots,
/// E_local_gauss, E_global_charge, E_both, eta_z2_shots, eta_u1_shots and the
/// retained fractions frac_local_gauss, frac_global_charge, frac_both.
ObservableSeries simulate_variant(const DynamicsSetup& setup, Variant variant, const SimulationOptions& options);

/// Deterministic stream splitting for per-point/variant/step seeds.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

struct SeriesOutput {
  std::string point;
  std::string variant;
  ModelParams params;
  std::uint64_t seed = 0;
  ObservableSeries series;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<SeriesOutput> series;
  std::vector<TrotterErrorPoint> trotter;
  std::optional<double> trotter_slope;
  std::vector<std::string> files;
  double wall_time_s = 0.0;
};

struct RunOptions {
  bool write_files = true;
};

/// Throws ConfigError / ResourceError before any work starts.
RunResult run_config(const ExperimentConfig& config, const RunOptions& options = {});

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
ExperimentConfig preset_config(std::string_view name);

struct PresetOverrides {
  std::optional<std::string> out;
  std::optional<std::size_t> shots;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  bool noise_off = false;
  std::optional<double> phi;
  bool exact_only = false;
  std::optional<std::vector<double>> f_grid;
};

ExperimentConfig apply_overrides(ExperimentConfig config, const PresetOverrides& overrides);

RunResult run_preset(std::string_view name, const PresetOverrides& overrides = {},
                     const RunOptions& options = {});

}  // namespace gaugesim

#endif  // GAUGESIM_HARNESS_H_
