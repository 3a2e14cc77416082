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

#include "gaugesim/pauli.h"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace gaugesim {

PauliString::PauliString(std::initializer_list<std::pair<int, Pauli>> ops) {
  for (const auto& [q, p] : ops) set(q, p);
}

void PauliString::set(int qubit, Pauli p) {
  if (qubit < 0 || qubit >= 64) throw std::out_of_range("PauliString: qubit index out of range");
  auto it = std::lower_bound(ops_.begin(), ops_.end(), qubit,
                             [](const auto& e, int q) { return e.first < q; });
  if (it != ops_.end() && it->first == qubit) {
    it->second = p;
  } else {
    ops_.insert(it, {qubit, p});
  }
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (const auto& [q, p] : ops_) {
    if (p != Pauli::Z) m |= std::uint64_t{1} << q;
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (const auto& [q, p] : ops_) {
    if (p != Pauli::X) m |= std::uint64_t{1} << q;
  }
  return m;
}

int PauliString::num_y() const {
  return static_cast<int>(
      std::count_if(ops_.begin(), ops_.end(), [](const auto& e) { return e.second == Pauli::Y; }));
}

namespace {

// Single-qubit product a*b = phase * c. Returns (phase exponent k for i^k, c or nullopt for I).
struct OneQubitProduct {
  int i_power;
  bool identity;
  Pauli result;
};

OneQubitProduct mul1(Pauli a, Pauli b) {
  if (a == b) return {0, true, Pauli::X};
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
  auto idx = [](Pauli p) { return static_cast<int>(p); };
  int ia = idx(a), ib = idx(b);
  int ic = 3 - ia - ib;
  bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? 1 : 3, false, static_cast<Pauli>(ic)};
}

}  // namespace

std::pair<std::complex<double>, PauliString> multiply(const PauliString& a, const PauliString& b) {
  PauliString out;
  int i_power = 0;
  auto ia = a.ops_.begin();
  auto ib = b.ops_.begin();
  while (ia != a.ops_.end() || ib != b.ops_.end()) {
    if (ib == b.ops_.end() || (ia != a.ops_.end() && ia->first < ib->first)) {
      out.ops_.push_back(*ia++);
    } else if (ia == a.ops_.end() || ib->first < ia->first) {
      out.ops_.push_back(*ib++);
    } else {
      auto r = mul1(ia->second, ib->second);
      i_power += r.i_power;
      if (!r.identity) out.ops_.emplace_back(ia->first, r.result);
      ++ia;
      ++ib;
    }
  }
  static constexpr std::complex<double> kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return {kPowers[i_power % 4], std::move(out)};
}

std::string PauliString::to_string() const {
  if (ops_.empty()) return "I";
  std::ostringstream os;
  bool first = true;
  for (const auto& [q, p] : ops_) {
    if (!first) os << ' ';
    first = false;
    os << "XYZ"[static_cast<int>(p)] << q;
  }
  return os.str();
}

}  // namespace gaugesim
