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

#include "gaugesim/harness.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "gaugesim/circuit.h"
#include "gaugesim/errors.h"
#include "gaugesim/noise.h"
#include "gaugesim/statevector.h"

namespace gaugesim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

enum SeedPurpose : std::uint64_t { kShotSeed = 1, kCPhaseSeed = 2, kReadoutSeed = 3 };

// Accumulates one statevector observable over noise realizations.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  Estimate estimate() const {
    const double mean = sum / n;
    if (n < 2) return Estimate::exact(mean);
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
    return {mean, std::sqrt(var / n)};
  }
};

struct StepObservables {
  std::vector<std::pair<std::string, double>> values;
};

StepObservables state_observables(const StateVector& psi, const DynamicsSetup& s, const GaugeSector& target,
                                  bool site) {
  StepObservables out;
  const GaugeBasisObservables g = gauge_basis_observables(psi, s.lattice, target, site);
  out.values.emplace_back("E", g.e);
  out.values.emplace_back("eta_z2", g.eta_z2);
  out.values.emplace_back("eta_u1", g.eta_u1);
  for (std::size_t q = 0; q < g.site.size(); ++q) out.values.emplace_back("n_q" + std::to_string(q), g.site[q]);
  return out;
}

void record_shots(ObservableSeries& series, int step, double t, const ShotTable& shots, const DynamicsSetup& s,
                  const GaugeSector& target) {
  series.add(step, t, "E_shots", electric_field_average(shots, s.lattice));
  series.add(step, t, "eta_z2_shots", eta_z2(shots, s.lattice, target));
  series.add(step, t, "eta_u1_shots", eta_u1(shots, s.lattice, target));
  const std::pair<const char*, PostselectCriteria> modes[] = {
      {"E_local_gauss", {true, false}}, {"E_global_charge", {false, true}}, {"E_both", {true, true}}};
  PostselectResult first;
  for (const auto& [name, crit] : modes) {
    PostselectResult r = postselect(shots, s.lattice, target, crit);
    const Estimate e = r.insufficient ? Estimate::insufficient() : electric_field_average(r.retained, s.lattice);
    series.add(step, t, name, e, r.fraction_retained);
    if (first.n_total == 0) first = std::move(r);
  }
  series.add_exact(step, t, "frac_local_gauss", first.fraction_local_gauss);
  series.add_exact(step, t, "frac_global_charge", first.fraction_global_charge);
  series.add_exact(step, t, "frac_both", first.fraction_both);
}

ShotTable sample_in_gauge_basis(const StateVector& psi, const DynamicsSetup& s, std::size_t shots,
                                std::uint64_t seed) {
  StateVector rotated = psi;
  apply_sequence(measurement_rotation_gates(s.lattice), rotated);
  ShotTable t = rotated.sample_shots(shots, seed);
  t.x_basis_mask = gauge_qubit_mask(s.lattice);
  return t;
}

std::string point_label(const std::optional<Sweep>& sweep, double value) {
  if (!sweep) return "base";
  return sweep->parameter + format_double(value);
}

void set_parameter(ModelParams& p, const std::string& name, double value) {
  if (name == "f") {
    p.f = value;
  } else if (name == "mu") {
    p.mu = value;
  } else if (name == "v") {
    p.protection_v = value;
  } else if (name == "dt") {
    p.dt = value;
  } else {
    throw ConfigError("sweep.parameter: unknown parameter '" + name + "'");
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string trotter_csv(const std::vector<TrotterErrorPoint>& points) {
  std::string s = "dt,steps,delta_e\n";
  for (const auto& p : points) {
    s += format_double(p.dt) + "," + std::to_string(p.steps) + "," + format_double(p.delta_e) + "\n";
  }
  return s;
}

}  // namespace

std::string_view software_version() { return "0.1.0"; }

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

DynamicsSetup make_setup(const ModelDocument& doc) {
  DynamicsSetup s{doc.lattice, doc.params, doc.effective_model(), resolve_initial_state(doc.initial_state, doc.lattice)};
  s.params.validate(s.lattice);
  return s;
}

ObservableSeries simulate_variant(const DynamicsSetup& s, Variant variant, const SimulationOptions& opt) {
  s.params.validate(s.lattice);
  if (s.lattice.num_qubits() > kMaxQubits) {
    throw ResourceError(std::to_string(s.lattice.num_qubits()) + " qubits exceeds the statevector cap");
  }
  if (variant != Variant::kExact && s.model == ModelKind::kU1) {
    throw ConfigError("the u1 Hamiltonian has no circuit");
  }
  const GaugeSector target = gauge_sector_of(s.initial, s.lattice);
  const int n = s.params.n_steps;
  const double dt = s.params.dt;

  StateVector start(s.lattice.num_qubits());
  apply_sequence(state_preparation_gates(s.initial, s.lattice), start);

  ObservableSeries series;
  if (variant == Variant::kExact) {
    const SparseHamiltonian h = build_hamiltonian(s.params, s.model, s.lattice);
    StateVector psi = start;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) psi = evolve_exact(psi, h, dt);
      const auto obs = state_observables(psi, s, target, opt.site_resolved);
      for (const auto& [name, v] : obs.values) {
        series.add_exact(k, k * dt, name, v);
      }
    }
    return series;
  }

  const GateSequence step = merge_z_rotations(trotter_step_gates(s.params, s.lattice));
  const FusedSequence fused_step = fuse_gates(step);
  const bool noisy = variant == Variant::kNoisy;
  const bool spread = noisy && opt.noise.cphase_phi_spread > 0.0;
  const int members = spread ? std::max(1, opt.ensemble) : 1;
  const bool readout = noisy && (opt.noise.readout_p0 > 0.0 || opt.noise.readout_p1 > 0.0);

  std::vector<StateVector> states(members, start);
  std::vector<std::vector<Accumulator>> acc;
  std::vector<std::string> names;
  for (int k = 0; k <= n; ++k) {
    ShotTable pooled;
    std::vector<Accumulator> row;
    for (int m = 0; m < members; ++m) {
      StateVector& psi = states[m];
      if (k > 0) {
        if (noisy) {
          NoiseParams np = opt.noise;
          np.seed = derive_seed(opt.seed, {kCPhaseSeed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)});
          apply_fused(fuse_gates(apply_cphase_noise(step, np)), psi);
        } else {
          apply_fused(fused_step, psi);
        }
      }
      const auto obs = state_observables(psi, s, target, opt.site_resolved);
      if (row.empty()) {
        row.resize(obs.values.size());
        names.clear();
        for (const auto& [name, v] : obs.values) names.push_back(name);
      }
      for (std::size_t i = 0; i < obs.values.size(); ++i) row[i].add(obs.values[i].second);

      if (opt.shots > 0) {
        const std::size_t share = opt.shots / members + (m == 0 ? opt.shots % members : 0);
        ShotTable t = sample_in_gauge_basis(
            psi, s, share, derive_seed(opt.seed, {kShotSeed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)}));
        if (readout) {
          NoiseParams np = opt.noise;
          np.seed = derive_seed(opt.seed, {kReadoutSeed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)});
          t = apply_readout_noise(t, np);
        }
        if (pooled.rows.empty()) {
          pooled = std::move(t);
        } else {
          pooled.rows.insert(pooled.rows.end(), t.rows.begin(), t.rows.end());
        }
      }
    }
    for (std::size_t i = 0; i < row.size(); ++i) series.add(k, k * dt, names[i], row[i].estimate());
    if (opt.shots > 0) record_shots(series, k, k * dt, pooled, s, target);
  }
  return series;
}

RunResult run_config(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  result.config = config;
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  if (options.write_files) fs::create_directories(dir);

  if (config.kind == ExperimentKind::kTrotterStudy) {
    result.trotter = trotter_error_study(config.model.params, config.model.lattice, config.dt_grid, config.t_f);
    result.trotter_slope = loglog_slope(result.trotter, 0.05, 0.4);
    if (options.write_files) {
      write_text(dir / "trotter_study.csv", trotter_csv(result.trotter));
      result.files.push_back("trotter_study.csv");
    }
  } else {
    std::vector<double> values = config.sweep ? config.sweep->values : std::vector<double>{0.0};
    for (std::size_t pi = 0; pi < values.size(); ++pi) {
      ModelDocument doc = config.model;
      if (config.sweep) set_parameter(doc.params, config.sweep->parameter, values[pi]);
      const DynamicsSetup setup = make_setup(doc);
      const std::string point = point_label(config.sweep, values[pi]);

      struct Job {
        Variant variant;
        std::string label;
        std::optional<double> phi;
      };
      std::vector<Job> jobs;
      for (Variant v : config.variants) {
        if (v == Variant::kNoisy) {
          if (!config.noise.enabled) continue;
          jobs.push_back({v, "noisy", std::nullopt});
          for (double phi : config.noise.phi_envelope) jobs.push_back({v, "noisy_phi" + format_double(phi), phi});
        } else {
          jobs.push_back({v, std::string(to_string(v)), std::nullopt});
        }
      }
      for (std::size_t ji = 0; ji < jobs.size(); ++ji) {
        const Job& job = jobs[ji];
        SimulationOptions opt;
        opt.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(pi), static_cast<std::uint64_t>(ji)});
        opt.noise = config.noise.params;
        if (job.phi) {
          opt.noise.cphase_phi_mean = *job.phi;
          opt.noise.cphase_phi_spread = 0.0;
        }
        opt.ensemble = config.noise.ensemble;
        opt.site_resolved = config.site_resolved;
        const bool sample = job.variant == Variant::kNoisy || (job.variant == Variant::kIdeal && config.sample_ideal);
        opt.shots = sample ? config.shots : 0;
        SeriesOutput out{point, job.label, setup.params, opt.seed, simulate_variant(setup, job.variant, opt)};
        if (options.write_files) {
          const std::string stem = point + "_" + job.label;
          write_text(dir / (stem + ".csv"), out.series.to_csv());
          write_text(dir / (stem + ".json"), out.series.to_json());
          result.files.push_back(stem + ".csv");
          result.files.push_back(stem + ".json");
        }
        result.series.push_back(std::move(out));
      }
    }
  }

  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (options.write_files) {
    nlohmann::ordered_json m;
    m["schema"] = "gaugesim-manifest/1";
    m["software"] = {{"name", "gaugesim"}, {"version", std::string(software_version())}};
    m["config"] = config_to_json(config);
    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (const auto& s : result.series) {
      seeds.push_back({{"point", s.point}, {"variant", s.variant}, {"seed", s.seed}});
    }
    m["seeds"] = seeds;
    if (result.trotter_slope) m["loglog_slope_0.05_0.4"] = *result.trotter_slope;
    m["files"] = result.files;
    m["wall_time_s"] = result.wall_time_s;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
  }
  return result;
}

std::vector<std::string> preset_names() {
  return {"fig1d", "fig1e", "fig2", "fig3", "extended_u1", "trotter_study", "postselect_study"};
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  c.output_dir = "out/" + c.name;
  c.noise.params.cphase_phi_mean = 0.138;
  c.noise.params.cphase_phi_spread = 0.015;
  c.noise.ensemble = 5;
  ModelDocument& m = c.model;
  if (name == "fig1d" || name == "fig1e") {
    m.lattice = LatticeSpec(11, Boundary::kOpen);
    m.params.f = name == "fig1d" ? 0.2 : 2.0;
    m.params.mu = 0.0;
    m.params.dt = 0.2;
    m.params.n_steps = 25;
    m.initial_state = InitialStateKind::kDefect;
    c.site_resolved = true;
  } else if (name == "fig2" || name == "postselect_study") {
    m.lattice = LatticeSpec(8, Boundary::kPeriodic);
    m.params.mu = 0.35;
    m.params.dt = 0.3;
    m.params.n_steps = 25;
    m.initial_state = InitialStateKind::kHalfFilling;
    if (name == "fig2") {
      c.sweep = Sweep{"f", {0.2, 0.75, 1.25, 2.0}};
    } else {
      m.params.f = 0.75;
      c.variants = {Variant::kIdeal, Variant::kNoisy};
    }
  } else if (name == "fig3" || name == "extended_u1") {
    const bool fig3 = name == "fig3";
    m.lattice = LatticeSpec(fig3 ? 6 : 8, Boundary::kPeriodic);
    m.hamiltonian = ModelKind::kZ2Protected;
    m.params.f = 2.5;
    m.params.mu = 2.5;
    m.params.dt = 0.2;
    m.params.n_steps = 25;
    if (fig3) {
      m.params.protection_seq = {Rational(-115, 146), Rational(116, 146), Rational(-118, 146),
                                 Rational(122, 146),  Rational(-130, 146), Rational(146, 146)};
      c.noise.phi_envelope = {0.123, 0.153};
    } else {
      for (int i = 0; i < 8; ++i) m.params.protection_seq.emplace_back(stagger(i));
    }
    m.initial_state = InitialStateKind::kPsi3;
    c.sweep = Sweep{"v", {0.0, 6.0}};
  } else if (name == "trotter_study") {
    c.kind = ExperimentKind::kTrotterStudy;
    m.lattice = LatticeSpec(4, Boundary::kPeriodic);
    m.params.f = 0.75;
    m.params.mu = 0.35;
    m.initial_state = InitialStateKind::kHalfFilling;
    for (int i = 1; i <= 20; ++i) c.dt_grid.push_back(i / 20.0);
    c.t_f = 10.0;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig apply_overrides(ExperimentConfig c, const PresetOverrides& o) {
  if (o.out) c.output_dir = *o.out;
  if (o.shots) c.shots = *o.shots;
  if (o.seed) c.seed = *o.seed;
  if (o.dt) {
    if (c.kind == ExperimentKind::kTrotterStudy) throw ConfigError("--dt: trotter_study sweeps dt itself");
    if (c.sweep && c.sweep->parameter == "dt") throw ConfigError("--dt: this preset sweeps dt");
    c.model.params.dt = *o.dt;
  }
  if (o.noise_off) {
    c.noise.enabled = false;
  } else if (o.phi) {
    c.noise.params.cphase_phi_mean = *o.phi;
  }
  if (o.exact_only) c.variants = {Variant::kExact};
  if (o.f_grid) {
    if (c.kind == ExperimentKind::kTrotterStudy) throw ConfigError("--f-grid: not available for trotter_study");
    if (c.sweep && c.sweep->parameter != "f") {
      throw ConfigError("--f-grid: this preset already sweeps " + c.sweep->parameter);
    }
    c.sweep = Sweep{"f", *o.f_grid};
  }
  c.validate();
  return c;
}

RunResult run_preset(std::string_view name, const PresetOverrides& overrides, const RunOptions& options) {
  return run_config(apply_overrides(preset_config(name), overrides), options);
}

}  // namespace gaugesim
