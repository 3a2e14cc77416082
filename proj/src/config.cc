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

#include "gaugesim/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gaugesim/errors.h"
#include "gaugesim/exact.h"
#include "gaugesim/statevector.h"

namespace gaugesim {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) fail(path + "." + k, "unknown key");
  }
}

double get_number(const json& j, const std::string& path, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) fail(path + "." + key, "must be finite");
  return x;
}

std::int64_t get_integer(const json& j, const std::string& path, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

bool get_bool(const json& j, const std::string& path, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& j, const std::string& path, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& path, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<int> get_sign_list(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of +1/-1");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer() || std::abs(v[i].get<int>()) != 1) {
      fail(path + "[" + std::to_string(i) + "]", "expected +1 or -1");
    }
    out.push_back(v[i].get<int>());
  }
  return out;
}

// Wraps parse helpers that throw ConfigError without a field path.
template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
}

}  // namespace

ModelKind ModelDocument::effective_model() const {
  if (hamiltonian) return *hamiltonian;
  return params.protection_v != 0.0 ? ModelKind::kZ2Protected : ModelKind::kZ2;
}

ordered_json model_to_json(const ModelDocument& doc) {
  ordered_json j;
  j["n_matter"] = doc.lattice.n_matter();
  j["boundary"] = std::string(to_string(doc.lattice.boundary()));
  if (doc.hamiltonian) j["hamiltonian"] = std::string(to_string(*doc.hamiltonian));
  j["j"] = doc.params.j;
  j["f"] = doc.params.f;
  j["mu"] = doc.params.mu;
  j["v"] = doc.params.protection_v;
  ordered_json c = ordered_json::array();
  for (const Rational& r : doc.params.protection_seq) c.push_back(r.to_string());
  j["c_seq"] = c;
  j["dt"] = doc.params.dt;
  j["n_steps"] = doc.params.n_steps;
  if (const auto* kind = std::get_if<InitialStateKind>(&doc.initial_state)) {
    j["initial_state"] = std::string(to_string(*kind));
  } else {
    const auto& ps = std::get<ProductState>(doc.initial_state);
    j["initial_state"] = {{"matter_z", ps.matter_z}, {"gauge_x", ps.gauge_x}};
  }
  return j;
}

ModelDocument model_from_json(const json& j, const std::string& path) {
  reject_unknown(j, path,
                 {"n_matter", "boundary", "hamiltonian", "j", "f", "mu", "v", "c_seq", "dt", "n_steps",
                  "initial_state"});
  if (!j.contains("n_matter")) fail(path + ".n_matter", "required");
  std::int64_t n = get_integer(j, path, "n_matter", 0);
  if (n < 2 || n > 64) fail(path + ".n_matter", "must be between 2 and 64");
  Boundary b = with_path(path + ".boundary",
                         [&] { return parse_boundary(get_string(j, path, "boundary", "periodic")); });
  ModelDocument doc{LatticeSpec(static_cast<int>(n), b), {}, InitialStateKind::kHalfFilling, std::nullopt};
  if (j.contains("hamiltonian")) {
    doc.hamiltonian = with_path(path + ".hamiltonian",
                                [&] { return parse_model_kind(get_string(j, path, "hamiltonian", "")); });
  }
  ModelParams& p = doc.params;
  p.j = get_number(j, path, "j", 1.0);
  p.f = get_number(j, path, "f", 0.0);
  p.mu = get_number(j, path, "mu", 0.0);
  p.protection_v = get_number(j, path, "v", 0.0);
  p.dt = get_number(j, path, "dt", 0.2);
  std::int64_t steps = get_integer(j, path, "n_steps", 0);
  if (steps < 0 || steps > 100'000) fail(path + ".n_steps", "must be between 0 and 100000");
  p.n_steps = static_cast<int>(steps);
  if (j.contains("c_seq")) {
    const json& c = j.at("c_seq");
    if (!c.is_array()) fail(path + ".c_seq", "expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::string item = path + ".c_seq[" + std::to_string(i) + "]";
      if (c[i].is_string()) {
        p.protection_seq.push_back(with_path(item, [&] { return Rational::parse(c[i].get<std::string>()); }));
      } else if (c[i].is_number()) {
        p.protection_seq.push_back(with_path(item, [&] { return Rational::from_double(c[i].get<double>()); }));
      } else {
        fail(item, "expected a number or a \"p/q\" string");
      }
    }
  }
  if (j.contains("initial_state")) {
    const json& s = j.at("initial_state");
    std::string sp = path + ".initial_state";
    if (s.is_string()) {
      doc.initial_state = with_path(sp, [&] { return parse_initial_state(s.get<std::string>()); });
    } else if (s.is_object()) {
      reject_unknown(s, sp, {"matter_z", "gauge_x"});
      if (!s.contains("matter_z") || !s.contains("gauge_x")) fail(sp, "needs matter_z and gauge_x");
      doc.initial_state = ProductState{get_sign_list(s.at("matter_z"), sp + ".matter_z"),
                                       get_sign_list(s.at("gauge_x"), sp + ".gauge_x")};
    } else {
      fail(sp, "expected a state name or {matter_z, gauge_x}");
    }
  }
  with_path(path, [&] {
    p.validate(doc.lattice);
    resolve_initial_state(doc.initial_state, doc.lattice);
    return 0;
  });
  return doc;
}

ProductState resolve_initial_state(const InitialState& s, const LatticeSpec& lattice) {
  if (const auto* kind = std::get_if<InitialStateKind>(&s)) return build_initial_state(*kind, lattice);
  const auto& ps = std::get<ProductState>(s);
  if (static_cast<int>(ps.matter_z.size()) != lattice.n_matter()) {
    throw ConfigError("initial_state.matter_z needs one entry per matter site");
  }
  if (static_cast<int>(ps.gauge_x.size()) != lattice.n_links()) {
    throw ConfigError("initial_state.gauge_x needs one entry per link");
  }
  return ps;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kIdeal: return "ideal";
    case Variant::kNoisy: return "noisy";
    case Variant::kExact: return "exact";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  if (s == "ideal") return Variant::kIdeal;
  if (s == "noisy") return Variant::kNoisy;
  if (s == "exact") return Variant::kExact;
  throw ConfigError("unknown variant '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  if (name.empty()) fail("name", "must not be empty");
  with_path("model", [&] {
    model.params.validate(model.lattice);
    resolve_initial_state(model.initial_state, model.lattice);
    return 0;
  });
  int L = model.lattice.num_qubits();
  if (L > kMaxQubits) {
    throw ResourceError("model: " + std::to_string(L) + " qubits exceeds the statevector cap of " +
                        std::to_string(kMaxQubits));
  }
  if (kind == ExperimentKind::kTrotterStudy) {
    if (dt_grid.empty()) fail("trotter.dt_grid", "must not be empty");
    for (double dt : dt_grid) {
      if (!(dt > 0.0) || !std::isfinite(dt)) fail("trotter.dt_grid", "entries must be positive");
    }
    if (!(t_f > 0.0) || !std::isfinite(t_f)) fail("trotter.t_f", "must be positive");
    if (L > kMaxMatrixFreeQubits) {
      throw ResourceError("model: exact evolution is capped at " + std::to_string(kMaxMatrixFreeQubits) +
                          " qubits");
    }
    return;
  }
  if (variants.empty()) fail("variants", "must not be empty");
  ModelKind mk = model.effective_model();
  for (Variant v : variants) {
    if (mk == ModelKind::kU1 && v != Variant::kExact) {
      fail("variants", "the u1 Hamiltonian has no circuit; only the exact variant is available");
    }
    if (v == Variant::kExact && L > kMaxMatrixFreeQubits) {
      throw ResourceError("variants: exact evolution is capped at " + std::to_string(kMaxMatrixFreeQubits) +
                          " qubits");
    }
  }
  if (mk == ModelKind::kZ2 && model.params.protection_v != 0.0) {
    fail("model.hamiltonian", "z2 ignores v; use z2_protected");
  }
  if (sweep) {
    static const std::set<std::string> allowed = {"f", "mu", "v", "dt"};
    if (!allowed.count(sweep->parameter)) fail("sweep.parameter", "must be one of f, mu, v, dt");
    if (sweep->values.empty()) fail("sweep.values", "must not be empty");
    for (double x : sweep->values) {
      if (!std::isfinite(x)) fail("sweep.values", "entries must be finite");
      if (sweep->parameter == "dt" && !(x > 0.0)) fail("sweep.values", "dt entries must be positive");
    }
  }
  with_path("noise", [&] {
    noise.params.validate();
    return 0;
  });
  if (noise.ensemble < 1 || noise.ensemble > 1000) fail("noise.ensemble", "must be between 1 and 1000");
  if (shots > 10'000'000) fail("shots", "must be at most 10^7");
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema"] = std::string(kConfigSchema);
  j["name"] = cfg.name;
  j["kind"] = cfg.kind == ExperimentKind::kDynamics ? "dynamics" : "trotter_study";
  j["model"] = model_to_json(cfg.model);
  if (cfg.kind == ExperimentKind::kTrotterStudy) {
    j["trotter"] = {{"dt_grid", cfg.dt_grid}, {"t_f", cfg.t_f}};
  } else {
    if (cfg.sweep) j["sweep"] = {{"parameter", cfg.sweep->parameter}, {"values", cfg.sweep->values}};
    ordered_json vs = ordered_json::array();
    for (Variant v : cfg.variants) vs.push_back(std::string(to_string(v)));
    j["variants"] = vs;
    j["noise"] = {{"enabled", cfg.noise.enabled},
                  {"phi", cfg.noise.params.cphase_phi_mean},
                  {"phi_spread", cfg.noise.params.cphase_phi_spread},
                  {"readout_p0", cfg.noise.params.readout_p0},
                  {"readout_p1", cfg.noise.params.readout_p1},
                  {"ensemble", cfg.noise.ensemble},
                  {"phi_envelope", cfg.noise.phi_envelope}};
    j["shots"] = cfg.shots;
    j["sample_ideal"] = cfg.sample_ideal;
    j["site_resolved"] = cfg.site_resolved;
  }
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j, "config",
                 {"schema", "name", "kind", "model", "trotter", "sweep", "variants", "noise", "shots", "seed",
                  "sample_ideal", "site_resolved", "output_dir"});
  if (!j.contains("schema")) fail("schema", "required");
  if (get_string(j, "config", "schema", "") != kConfigSchema) {
    fail("schema", "expected \"" + std::string(kConfigSchema) + "\"");
  }
  ExperimentConfig cfg;
  cfg.name = get_string(j, "config", "name", cfg.name);
  std::string kind = get_string(j, "config", "kind", "dynamics");
  if (kind == "dynamics") {
    cfg.kind = ExperimentKind::kDynamics;
  } else if (kind == "trotter_study") {
    cfg.kind = ExperimentKind::kTrotterStudy;
  } else {
    fail("kind", "must be dynamics or trotter_study");
  }
  if (!j.contains("model")) fail("model", "required");
  cfg.model = model_from_json(j.at("model"), "model");
  if (j.contains("trotter")) {
    const json& t = j.at("trotter");
    reject_unknown(t, "trotter", {"dt_grid", "t_f"});
    cfg.dt_grid = get_number_list(t, "trotter", "dt_grid");
    cfg.t_f = get_number(t, "trotter", "t_f", cfg.t_f);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, "sweep", {"parameter", "values"});
    cfg.sweep = Sweep{get_string(s, "sweep", "parameter", ""), get_number_list(s, "sweep", "values")};
  }
  if (j.contains("variants")) {
    const json& v = j.at("variants");
    if (!v.is_array()) fail("variants", "expected an array");
    cfg.variants.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::string p = "variants[" + std::to_string(i) + "]";
      if (!v[i].is_string()) fail(p, "expected a string");
      Variant var = with_path(p, [&] { return parse_variant(v[i].get<std::string>()); });
      for (Variant seen : cfg.variants) {
        if (seen == var) fail(p, "duplicate variant");
      }
      cfg.variants.push_back(var);
    }
  }
  if (j.contains("noise")) {
    const json& nz = j.at("noise");
    reject_unknown(nz, "noise",
                   {"enabled", "phi", "phi_spread", "readout_p0", "readout_p1", "ensemble", "phi_envelope"});
    NoiseConfig& n = cfg.noise;
    n.enabled = get_bool(nz, "noise", "enabled", n.enabled);
    n.params.cphase_phi_mean = get_number(nz, "noise", "phi", n.params.cphase_phi_mean);
    n.params.cphase_phi_spread = get_number(nz, "noise", "phi_spread", n.params.cphase_phi_spread);
    n.params.readout_p0 = get_number(nz, "noise", "readout_p0", n.params.readout_p0);
    n.params.readout_p1 = get_number(nz, "noise", "readout_p1", n.params.readout_p1);
    n.ensemble = static_cast<int>(get_integer(nz, "noise", "ensemble", n.ensemble));
    n.phi_envelope = get_number_list(nz, "noise", "phi_envelope");
  }
  std::int64_t shots = get_integer(j, "config", "shots", static_cast<std::int64_t>(cfg.shots));
  if (shots < 0) fail("shots", "must be non-negative");
  cfg.shots = static_cast<std::size_t>(shots);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() >= 0)) {
      fail("seed", "expected a non-negative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.sample_ideal = get_bool(j, "config", "sample_ideal", cfg.sample_ideal);
  cfg.site_resolved = get_bool(j, "config", "site_resolved", cfg.site_resolved);
  cfg.output_dir = get_string(j, "config", "output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace gaugesim
