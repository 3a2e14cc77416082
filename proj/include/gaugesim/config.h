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

#ifndef GAUGESIM_CONFIG_H_
#define GAUGESIM_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gaugesim/lattice.h"
#include "gaugesim/noise.h"
#include "json.hpp"

namespace gaugesim {

inline constexpr std::string_view kConfigSchema = "gaugesim-config/1";

using InitialState = std::variant<InitialStateKind, ProductState>;

/// Lattice, couplings and initial state as one JSON document with keys
/// n_matter, boundary, j, f, mu, v, c_seq, dt, n_steps, initial_state.
struct ModelDocument {
  LatticeSpec lattice{2, Boundary::kPeriodic};
  ModelParams params;
  InitialState initial_state = InitialStateKind::kHalfFilling;
  /// Unset means z2, or z2_protected when params.protection_v != 0.
  std::optional<ModelKind> hamiltonian;

  ModelKind effective_model() const;
};

nlohmann::ordered_json model_to_json(const ModelDocument& doc);
/// Throws ConfigError naming the offending field; `path` prefixes messages.
ModelDocument model_from_json(const nlohmann::json& j, const std::string& path = "model");

ProductState resolve_initial_state(const InitialState& s, const LatticeSpec& lattice);

enum class Variant { kIdeal, kNoisy, kExact };
std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

enum class ExperimentKind { kDynamics, kTrotterStudy };

struct Sweep {
  /// One of f, mu, v, dt.
  std::string parameter;
  std::vector<double> values;
};

struct NoiseConfig {
  bool enabled = true;
  NoiseParams params;
  /// Independent noise draws averaged per point; only used when the phi
  /// spread is non-zero.
  int ensemble = 5;
  /// Extra noisy runs at these fixed phi values (envelope curves).
  std::vector<double> phi_envelope;
};

struct ExperimentConfig {
  std::string name = "custom";
  ExperimentKind kind = ExperimentKind::kDynamics;
  ModelDocument model;
  std::optional<Sweep> sweep;
  std::vector<Variant> variants = {Variant::kIdeal, Variant::kNoisy, Variant::kExact};
  NoiseConfig noise;
  std::size_t shots = 50'000;
  std::uint64_t seed = 20'231'115;
  /// Also sample shots from the ideal circuit.
  bool sample_ideal = false;
  bool site_resolved = false;
  /// Trotter-study settings.
  std::vector<double> dt_grid;
  double t_f = 10.0;
  std::string output_dir = "out";

  /// Throws ConfigError / ResourceError.
  void validate() const;
};

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace gaugesim

#endif  // GAUGESIM_CONFIG_H_
