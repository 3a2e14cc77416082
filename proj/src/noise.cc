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

#include "gaugesim/noise.h"

#include <cmath>
#include <random>

#include "gaugesim/errors.h"

namespace gaugesim {

namespace {

// Separate streams so that gate and readout noise stay independent for one seed.
constexpr std::uint64_t kReadoutStream = 0x9E3779B97F4A7C15ULL;

class PhiSource {
 public:
  explicit PhiSource(const NoiseParams& noise) : noise_(noise), rng_(noise.seed) {}
  double next() {
    if (noise_.cphase_phi_spread == 0.0) return noise_.cphase_phi_mean;
    const double u = uniform_from_bits(rng_());
    return noise_.cphase_phi_mean + noise_.cphase_phi_spread * (2.0 * u - 1.0);
  }

 private:
  const NoiseParams& noise_;
  std::mt19937_64 rng_;
};

}  // namespace

void NoiseParams::validate() const {
  if (!std::isfinite(cphase_phi_mean) || !std::isfinite(cphase_phi_spread)) {
    throw ConfigError("noise: phi must be finite");
  }
  if (cphase_phi_spread < 0.0) throw ConfigError("noise: phi spread must be >= 0");
  for (double p : {readout_p0, readout_p1}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("noise: readout probabilities must lie in [0, 1]");
  }
}

Circuit apply_cphase_noise(const Circuit& circuit, const NoiseParams& noise) {
  noise.validate();
  PhiSource phi(noise);
  Circuit out(circuit.num_qubits());
  out.set_global_phase(circuit.global_phase());
  for (const auto& m : circuit.moments()) {
    Moment nm;
    nm.gates.reserve(m.gates.size());
    for (const auto& g : m.gates) {
      nm.gates.push_back(g);
      if (g.kind == GateKind::kSqrtISwapDag) {
        nm.gates.push_back(NativeGate::cphase_residual(g.qubits[0], g.qubits[1], phi.next()));
      }
    }
    out.add_moment(std::move(nm));
  }
  return out;
}

GateSequence apply_cphase_noise(const GateSequence& seq, const NoiseParams& noise) {
  noise.validate();
  PhiSource phi(noise);
  GateSequence out;
  out.global_phase = seq.global_phase;
  out.gates.reserve(seq.gates.size() * 2);
  for (const auto& g : seq.gates) {
    out.gates.push_back(g);
    if (g.kind == GateKind::kSqrtISwapDag) {
      out.gates.push_back(NativeGate::cphase_residual(g.qubits[0], g.qubits[1], phi.next()));
    }
  }
  return out;
}

ShotTable apply_readout_noise(const ShotTable& shots, const NoiseParams& noise) {
  noise.validate();
  ShotTable out = shots;
  if (noise.readout_p0 == 0.0 && noise.readout_p1 == 0.0) return out;
  std::mt19937_64 rng(noise.seed ^ kReadoutStream);
  for (auto& row : out.rows) {
    for (int q = 0; q < shots.num_qubits; ++q) {
      const bool one = (row >> q) & 1U;
      const double p = one ? noise.readout_p1 : noise.readout_p0;
      if (uniform_from_bits(rng()) < p) row ^= std::uint64_t{1} << q;
    }
  }
  return out;
}

}  // namespace gaugesim
