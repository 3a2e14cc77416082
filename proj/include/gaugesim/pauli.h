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

#ifndef GAUGESIM_PAULI_H_
#define GAUGESIM_PAULI_H_

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gaugesim {

enum class Pauli : std::uint8_t { X, Y, Z };

/// Sparse Pauli string: identity on every qubit not listed.
///
/// Entries are kept sorted by qubit with no duplicates. The bit-mask view
/// (`x_mask`, `z_mask`) follows P|b> = i^{nY} (-1)^{popcount(b & z_mask)}
/// |b ^ x_mask>, using Y = iXZ.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::initializer_list<std::pair<int, Pauli>> ops);

  void set(int qubit, Pauli p);
  const std::vector<std::pair<int, Pauli>>& ops() const { return ops_; }
  bool empty() const { return ops_.empty(); }
  int max_qubit() const { return ops_.empty() ? -1 : ops_.back().first; }

  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int num_y() const;

  /// Product of two Pauli strings as phase * string.
  friend std::pair<std::complex<double>, PauliString> multiply(
      const PauliString& a, const PauliString& b);

  /// Text form such as "X0 Z1 X2"; "I" for the empty string.
  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<std::pair<int, Pauli>> ops_;
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

}  // namespace gaugesim

#endif  // GAUGESIM_PAULI_H_
