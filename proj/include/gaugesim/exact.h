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

#ifndef GAUGESIM_EXACT_H_
#define GAUGESIM_EXACT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "gaugesim/lattice.h"
#include "gaugesim/pauli.h"
#include "gaugesim/statevector.h"

namespace gaugesim {

inline constexpr int kMaxStoredMatrixQubits = 16;
inline constexpr int kMaxMatrixFreeQubits = 24;
inline constexpr int kMaxDenseQubits = 12;

/// Hermitian operator given as a sum of Pauli strings with real
/// coefficients. Up to kMaxStoredMatrixQubits qubits the matrix is also
/// stored in CSR form; above that it is applied matrix-free.
class SparseHamiltonian {
 public:
  SparseHamiltonian(int num_qubits, std::vector<PauliTerm> terms);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << num_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool has_stored_matrix() const { return !row_ptr_.empty(); }
  std::size_t nonzeros() const { return values_.size(); }

  /// out = H * in.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  double expectation(const StateVector& state) const;

  /// Row-major dense matrix; limited to kMaxDenseQubits qubits.
  std::vector<Complex> to_dense() const;
  /// Matrix element <row|H|col>.
  Complex element(std::uint64_t row, std::uint64_t col) const;

 private:
  struct Group {
    std::uint64_t x_mask;
    // (z_mask, coefficient * i^{nY})
    std::vector<std::pair<std::uint64_t, Complex>> parts;
  };

  Complex group_value(const Group& g, std::uint64_t col) const;

  int num_qubits_;
  std::vector<PauliTerm> terms_;
  std::vector<Group> groups_;
  std::vector<std::uint64_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<Complex> values_;
};

/// Hamiltonian of `model` built from pauli_term_list.
SparseHamiltonian build_hamiltonian(const ModelParams& params, ModelKind model,
                                    const LatticeSpec& lattice);

struct KrylovOptions {
  /// 0 picks 20.
  int krylov_dim = 0;
  double tolerance = 1e-10;
  int max_substeps = 1'000'000;
};

/// exp(-i H t)|psi> by Lanczos propagation with adaptive substeps.
/// Throws ToleranceError if a substep cannot reach the tolerance.
StateVector evolve_exact(const StateVector& state, const SparseHamiltonian& h, double t,
                         const KrylovOptions& options = {});

struct TrotterErrorPoint {
  double dt = 0.0;
  int steps = 0;
  double delta_e = 0.0;
};

/// Mean over k = 1..m of |E_dt(k dt) - E_exact(k dt)| with m = floor(t_f / dt),
/// both runs starting from the half-filling state.
std::vector<TrotterErrorPoint> trotter_error_study(const ModelParams& params,
                                                   const LatticeSpec& lattice,
                                                   const std::vector<double>& dt_grid,
                                                   double t_f = 10.0);

/// Least-squares slope of log(delta_e) against log(dt) over dt in [lo, hi].
double loglog_slope(const std::vector<TrotterErrorPoint>& points, double lo, double hi);

}  // namespace gaugesim

#endif  // GAUGESIM_EXACT_H_
