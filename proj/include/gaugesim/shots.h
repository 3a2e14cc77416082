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

#ifndef GAUGESIM_SHOTS_H_
#define GAUGESIM_SHOTS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gaugesim {

/// Measured bitstrings. Bit k of each row is the outcome on qubit k; qubits
/// set in `x_basis_mask` were rotated to the x basis before readout. A bit b
/// maps to the eigenvalue 1 - 2b in the measured basis.
struct ShotTable {
  int num_qubits = 0;
  std::uint64_t x_basis_mask = 0;
  std::vector<std::uint64_t> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  bool bit(std::size_t shot, int qubit) const { return (rows[shot] >> qubit) & 1U; }
  int eigenvalue(std::size_t shot, int qubit) const { return bit(shot, qubit) ? -1 : 1; }

  friend bool operator==(const ShotTable&, const ShotTable&) = default;
};

}  // namespace gaugesim

#endif  // GAUGESIM_SHOTS_H_
