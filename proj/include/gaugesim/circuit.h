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

#ifndef GAUGESIM_CIRCUIT_H_
#define GAUGESIM_CIRCUIT_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gaugesim/lattice.h"
#include "gaugesim/statevector.h"

namespace gaugesim {

enum class GateKind {
  kSqrtISwapDag,    // exp(-i pi/8 (XX + YY))
  kRz,              // exp(-i angle Z / 2)
  kRxy,             // exp(-i angle (cos(axis) X + sin(axis) Y) / 2)
  kCPhaseResidual,  // diag(1, 1, 1, exp(-i angle))
};

struct NativeGate {
  GateKind kind = GateKind::kRz;
  std::array<int, 2> qubits = {-1, -1};
  double angle = 0.0;
  double axis = 0.0;

  static NativeGate sqrt_iswap_dag(int q1, int q2) { return {GateKind::kSqrtISwapDag, {q1, q2}, 0.0, 0.0}; }
  static NativeGate rz(int q, double angle) { return {GateKind::kRz, {q, -1}, angle, 0.0}; }
  static NativeGate rxy(int q, double axis, double angle) { return {GateKind::kRxy, {q, -1}, angle, axis}; }
  static NativeGate rx(int q, double angle) { return rxy(q, 0.0, angle); }
  static NativeGate ry(int q, double angle) { return rxy(q, kHalfPi, angle); }
  static NativeGate cphase_residual(int q1, int q2, double phi) {
    return {GateKind::kCPhaseResidual, {q1, q2}, phi, 0.0};
  }

  int arity() const { return qubits[1] < 0 ? 1 : 2; }
  bool is_two_qubit() const { return arity() == 2; }
  bool acts_on(int q) const { return qubits[0] == q || qubits[1] == q; }

  Matrix2 matrix1() const;
  Matrix4 matrix2() const;

  friend bool operator==(const NativeGate&, const NativeGate&) = default;

  static constexpr double kHalfPi = 1.57079632679489661923;
};

/// Unscheduled gate list with a tracked global phase exp(i global_phase).
struct GateSequence {
  std::vector<NativeGate> gates;
  double global_phase = 0.0;

  void append(const GateSequence& other);
};

struct Moment {
  std::vector<NativeGate> gates;
};

struct GateCounts {
  int two_qubit = 0;
  int rz = 0;
  int rxy = 0;
  int cphase_residual = 0;
};

/// Ordered moments of native gates. Gates in a moment act on disjoint qubits,
/// except that a CPhaseResidual directly follows the two-qubit gate it
/// accompanies on the same pair.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {}

  int num_qubits() const { return num_qubits_; }
  const std::vector<Moment>& moments() const { return moments_; }
  std::vector<Moment>& mutable_moments() { return moments_; }
  double global_phase() const { return global_phase_; }
  void set_global_phase(double phase) { global_phase_ = phase; }

  void add_moment(Moment m);
  /// Number of moments that contain at least one two-qubit gate.
  int two_qubit_depth() const;
  GateCounts counts() const;
  GateSequence flatten() const;
  /// Throws std::logic_error if a moment has overlapping supports.
  void check_valid() const;

  /// One moment per line, gates as name(args)@qubits.
  std::string to_text() const;

 private:
  int num_qubits_ = 0;
  std::vector<Moment> moments_;
  double global_phase_ = 0.0;
};

/// Merges runs of z-rotations on the same qubit that are adjacent in that
/// qubit's gate order; rotations reducing to the identity are dropped.
GateSequence merge_z_rotations(const GateSequence& seq);

/// Greedy as-soon-as-possible packing that keeps each qubit's gate order.
Circuit schedule_moments(const GateSequence& seq, int num_qubits);

/// exp(-i alpha (sigma_i^+ tau_j^z sigma_k^- + h.c.)) from six native
/// sqrt(iSWAP)^dagger gates and z-rotations; `j` is the link between matter
/// qubits `i` and `k`.
GateSequence synthesize_ujk(double alpha, int i, int j, int k);

/// sqrt(iSWAP) on (a, b) realized from the native gate and z-rotations.
GateSequence sqrt_iswap_from_native(int a, int b);

/// Gates of one first-order Trotter step: U_ijk(J dt) on even bonds, then on
/// odd bonds, then matter z-rotations, then link x-rotations. Protection
/// terms are folded into the single-qubit layers.
GateSequence trotter_step_gates(const ModelParams& params, const LatticeSpec& lattice);

/// One scheduled Trotter step.
Circuit build_trotter_step(const ModelParams& params, const LatticeSpec& lattice);

enum class MeasureBasis { kComputational, kGaugeX };

/// Single-qubit gates mapping |0...0> to `state`; links are prepared in
/// tau^x eigenstates.
GateSequence state_preparation_gates(const ProductState& state, const LatticeSpec& lattice);
/// Rotates every link qubit so that a computational readout measures tau^x.
GateSequence measurement_rotation_gates(const LatticeSpec& lattice);
std::uint64_t gauge_qubit_mask(const LatticeSpec& lattice);

/// Preparation, params.n_steps Trotter steps and measurement rotations,
/// z-merged and scheduled as one circuit.
Circuit build_experiment_circuit(InitialStateKind kind, const ModelParams& params,
                                 const LatticeSpec& lattice, MeasureBasis basis);

/// Dense blocks for simulation: every single-qubit gate is folded into a
/// neighbouring block on the same qubit and consecutive gates on one pair
/// share a block. Single-qubit blocks use the top-left 2x2 of `matrix`.
struct FusedGate {
  std::array<int, 2> qubits = {-1, -1};
  Matrix4 matrix{};
};

struct FusedSequence {
  std::vector<FusedGate> gates;
  double global_phase = 0.0;
};

FusedSequence fuse_gates(const GateSequence& seq);
void apply_fused(const FusedSequence& fused, StateVector& state);

void apply_gate(const NativeGate& gate, StateVector& state);
void apply_sequence(const GateSequence& seq, StateVector& state);
void apply_circuit(const Circuit& circuit, StateVector& state);

std::string gate_name(GateKind kind);

}  // namespace gaugesim

#endif  // GAUGESIM_CIRCUIT_H_
