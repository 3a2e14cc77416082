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

#include "gaugesim/statevector.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "blocked_sum.h"
#include "gaugesim/errors.h"

namespace gaugesim {

namespace {

constexpr std::int64_t kParallelThreshold = std::int64_t{1} << 14;
constexpr char kMagic[8] = {'G', 'S', 'I', 'M', 'S', 'V', '0', '1'};

// Inserts a zero bit at position `pos` of `k`.
inline std::uint64_t insert_zero(std::uint64_t k, int pos) {
  const std::uint64_t low = k & ((std::uint64_t{1} << pos) - 1);
  return ((k >> pos) << (pos + 1)) | low;
}

template <typename T>
void write_le(std::ostream& os, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw std::runtime_error("statevector dump: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

bool is_diagonal(const Matrix4& u) {
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (r != c && u[r * 4 + c] != Complex{}) return false;
    }
  }
  return true;
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw ConfigError("statevector needs at least one qubit");
  if (num_qubits > kMaxQubits) {
    throw ResourceError("statevector limited to " + std::to_string(kMaxQubits) + " qubits");
  }
  amps_.assign(std::size_t{1} << num_qubits, Complex{});
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes) : StateVector(num_qubits) {
  if (amplitudes.size() != amps_.size()) throw ConfigError("amplitude count does not match 2^L");
  amps_ = std::move(amplitudes);
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.size()) throw std::out_of_range("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

void StateVector::check_qubit(int q) const {
  if (q < 0 || q >= num_qubits_) throw std::out_of_range("qubit index out of range");
}

double StateVector::norm_squared() const {
  const Complex* a = amps_.data();
  return detail::blocked_sum(static_cast<std::int64_t>(amps_.size()), 1,
                             [a](std::int64_t i, double* acc) { acc[0] += std::norm(a[i]); })[0];
}

void StateVector::normalize() {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  scale(1.0 / n);
}

void StateVector::scale(Complex factor) {
  const auto n = static_cast<std::int64_t>(amps_.size());
  Complex* a = amps_.data();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) a[i] *= factor;
}

void StateVector::apply_1q(const Matrix2& u, int q) {
  check_qubit(q);
  if (u[1] == Complex{} && u[2] == Complex{}) {
    apply_diagonal_1q(u[0], u[3], q);
    return;
  }
  const auto half = static_cast<std::int64_t>(amps_.size() / 2);
  const std::uint64_t stride = std::uint64_t{1} << q;
  Complex* a = amps_.data();
  const Complex u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
#pragma omp parallel for schedule(static) if (half > kParallelThreshold)
  for (std::int64_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = insert_zero(static_cast<std::uint64_t>(k), q);
    const std::uint64_t i1 = i0 | stride;
    const Complex a0 = a[i0];
    const Complex a1 = a[i1];
    a[i0] = u00 * a0 + u01 * a1;
    a[i1] = u10 * a0 + u11 * a1;
  }
}

void StateVector::apply_diagonal_1q(Complex d0, Complex d1, int q) {
  check_qubit(q);
  const auto n = static_cast<std::int64_t>(amps_.size());
  Complex* a = amps_.data();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) a[i] *= ((i >> q) & 1) ? d1 : d0;
}

void StateVector::apply_2q(const Matrix4& u, int q1, int q2) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw std::invalid_argument("apply_2q: qubit indices must differ");
  if (is_diagonal(u)) {
    apply_diagonal_2q({u[0], u[5], u[10], u[15]}, q1, q2);
    return;
  }
  const int lo = std::min(q1, q2);
  const int hi = std::max(q1, q2);
  const std::uint64_t m1 = std::uint64_t{1} << q1;
  const std::uint64_t m2 = std::uint64_t{1} << q2;
  const auto quarter = static_cast<std::int64_t>(amps_.size() / 4);
  Complex* a = amps_.data();
  const Matrix4 m = u;
#pragma omp parallel for schedule(static) if (quarter > kParallelThreshold)
  for (std::int64_t k = 0; k < quarter; ++k) {
    const std::uint64_t base = insert_zero(insert_zero(static_cast<std::uint64_t>(k), lo), hi);
    const std::uint64_t idx[4] = {base, base | m1, base | m2, base | m1 | m2};
    const Complex v[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      a[idx[r]] = m[r * 4] * v[0] + m[r * 4 + 1] * v[1] + m[r * 4 + 2] * v[2] + m[r * 4 + 3] * v[3];
    }
  }
}

void StateVector::apply_diagonal_2q(const std::array<Complex, 4>& d, int q1, int q2) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw std::invalid_argument("apply_diagonal_2q: qubit indices must differ");
  const auto n = static_cast<std::int64_t>(amps_.size());
  Complex* a = amps_.data();
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    const int s = static_cast<int>(((i >> q1) & 1) | (((i >> q2) & 1) << 1));
    a[i] *= d[s];
  }
}

Complex StateVector::expect_pauli_complex(const PauliString& p) const {
  if (p.max_qubit() >= num_qubits_) throw std::out_of_range("Pauli string exceeds register");
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  const auto n = static_cast<std::int64_t>(amps_.size());
  const Complex* a = amps_.data();
  const auto sum = detail::blocked_sum(n, 2, [=](std::int64_t i, double* acc) {
    const auto b = static_cast<std::uint64_t>(i);
    Complex term = std::conj(a[b ^ xm]) * a[b];
    if (std::popcount(b & zm) & 1) term = -term;
    acc[0] += term.real();
    acc[1] += term.imag();
  });
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[p.num_y() % 4] * Complex{sum[0], sum[1]};
}

std::vector<double> StateVector::expect_z_all() const {
  std::vector<double> out(num_qubits_, 0.0);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    if (p == 0.0) continue;
    for (int q = 0; q < num_qubits_; ++q) out[q] += ((i >> q) & 1) ? -p : p;
  }
  return out;
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.size() != size()) throw std::invalid_argument("inner: size mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < amps_.size(); ++i) acc += std::conj(amps_[i]) * other.amps_[i];
  return acc;
}

ShotTable StateVector::sample_shots(std::size_t n_shots, std::uint64_t seed) const {
  ShotTable table;
  table.num_qubits = num_qubits_;
  if (n_shots == 0) return table;
  std::vector<double> cdf(amps_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    acc += std::norm(amps_[i]);
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  table.rows.reserve(n_shots);
  for (std::size_t s = 0; s < n_shots; ++s) {
    const double u = uniform_from_bits(rng()) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // upper_bound never lands on a zero-probability entry.
    std::size_t idx = it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
    table.rows.push_back(idx);
  }
  return table;
}

void StateVector::write_binary(std::ostream& os) const {
  os.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(num_qubits_));
  for (const auto& z : amps_) {
    write_le<double>(os, z.real());
    write_le<double>(os, z.imag());
  }
}

StateVector StateVector::read_binary(std::istream& is) {
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("statevector dump: bad magic");
  }
  const auto l = read_le<std::uint32_t>(is);
  if (l < 1 || l > static_cast<std::uint32_t>(kMaxQubits)) {
    throw ResourceError("statevector dump: qubit count out of range");
  }
  std::vector<Complex> amps(std::size_t{1} << l);
  for (auto& z : amps) {
    const double re = read_le<double>(is);
    const double im = read_le<double>(is);
    z = {re, im};
  }
  return StateVector(static_cast<int>(l), std::move(amps));
}

}  // namespace gaugesim
