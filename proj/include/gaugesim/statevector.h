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

#ifndef GAUGESIM_STATEVECTOR_H_
#define GAUGESIM_STATEVECTOR_H_

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gaugesim/pauli.h"
#include "gaugesim/shots.h"

namespace gaugesim {

using Complex = std::complex<double>;

/// Row-major dense gate matrices.
using Matrix2 = std::array<Complex, 4>;
using Matrix4 = std::array<Complex, 16>;

inline constexpr int kMaxQubits = 26;

/// Dense 2^L amplitude array. Qubit k is bit k of the basis-state index.
///
/// Gate kernels partition the amplitude array across OpenMP threads when the
/// library is built with OpenMP; writes never overlap. A StateVector must not
/// be mutated concurrently with any other access.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits. Throws ResourceError above kMaxQubits.
  explicit StateVector(int num_qubits);
  StateVector(int num_qubits, std::vector<Complex> amplitudes);

  static StateVector basis_state(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> mutable_amplitudes() { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;
  void normalize();

  void apply_1q(const Matrix2& u, int q);
  /// Subindex convention: s = bit(q1) + 2 * bit(q2), so q1 is the low bit.
  void apply_2q(const Matrix4& u, int q1, int q2);
  void apply_diagonal_1q(Complex d0, Complex d1, int q);
  void apply_diagonal_2q(const std::array<Complex, 4>& d, int q1, int q2);
  void scale(Complex factor);

  Complex expect_pauli_complex(const PauliString& p) const;
  /// Real part of <psi|P|psi>; the empty string gives the squared norm.
  double expect_pauli(const PauliString& p) const { return expect_pauli_complex(p).real(); }
  /// <psi|Z_q|psi> for every qubit in one pass.
  std::vector<double> expect_z_all() const;

  Complex inner(const StateVector& other) const;

  /// Draws `n_shots` i.i.d. basis states from |amplitude|^2 using
  /// std::mt19937_64 seeded with `seed`; doubles are formed from the top 53
  /// bits of each draw, so tables are identical across platforms.
  ShotTable sample_shots(std::size_t n_shots, std::uint64_t seed) const;

  /// Binary dump: 8-byte magic "GSIMSV01", uint32 num_qubits, then 2^L
  /// (real, imag) float64 pairs, all little-endian.
  void write_binary(std::ostream& os) const;
  static StateVector read_binary(std::istream& is);

 private:
  void check_qubit(int q) const;

  int num_qubits_;
  std::vector<Complex> amps_;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double uniform_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace gaugesim

#endif  // GAUGESIM_STATEVECTOR_H_
