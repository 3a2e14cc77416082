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

#ifndef GAUGESIM_NOISE_H_
#define GAUGESIM_NOISE_H_

#include <cstdint>

#include "gaugesim/circuit.h"
#include "gaugesim/shots.h"

namespace gaugesim {

/// Hardware imperfections: the parasitic controlled phase that accompanies
/// each native two-qubit gate and asymmetric readout bit flips.
struct NoiseParams {
  double cphase_phi_mean = 0.138;
  double cphase_phi_spread = 0.0;
  /// P(read 1 | prepared 0) and P(read 0 | prepared 1).
  double readout_p0 = 0.0;
  double readout_p1 = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Appends CPhaseResidual(phi) after every two-qubit gate, in the same
/// moment. phi is the mean when the spread is zero, otherwise uniform in
/// mean +- spread, drawn in gate order from std::mt19937_64(seed).
Circuit apply_cphase_noise(const Circuit& circuit, const NoiseParams& noise);
GateSequence apply_cphase_noise(const GateSequence& seq, const NoiseParams& noise);

/// Flips 0 -> 1 with readout_p0 and 1 -> 0 with readout_p1, independently
/// per bit.
ShotTable apply_readout_noise(const ShotTable& shots, const NoiseParams& noise);

}  // namespace gaugesim

#endif  // GAUGESIM_NOISE_H_
