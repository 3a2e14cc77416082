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

#include "gaugesim/exact.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gaugesim/circuit.h"
#include "gaugesim/errors.h"

namespace gaugesim {

namespace {

constexpr std::int64_t kParallelThreshold = std::int64_t{1} << 14;

Complex i_power(int n) {
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[n % 4];
}

}  // namespace

SparseHamiltonian::SparseHamiltonian(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits), terms_(std::move(terms)) {
  if (num_qubits < 1) throw ConfigError("hamiltonian needs at least one qubit");
  if (num_qubits > kMaxMatrixFreeQubits) {
    throw ResourceError("hamiltonian limited to " + std::to_string(kMaxMatrixFreeQubits) + " qubits");
  }
  for (const auto& t : terms_) {
    if (t.string.max_qubit() >= num_qubits) throw std::out_of_range("Pauli term exceeds register");
    const std::uint64_t xm = t.string.x_mask();
    auto it = std::find_if(groups_.begin(), groups_.end(), [&](const Group& g) { return g.x_mask == xm; });
    if (it == groups_.end()) {
      groups_.push_back({xm, {}});
      it = groups_.end() - 1;
    }
    it->parts.emplace_back(t.string.z_mask(), t.coefficient * i_power(t.string.num_y()));
  }

  if (num_qubits_ <= kMaxStoredMatrixQubits) {
    const std::size_t dim = dimension();
    row_ptr_.assign(dim + 1, 0);
    cols_.reserve(dim * groups_.size());
    values_.reserve(dim * groups_.size());
    for (std::uint64_t row = 0; row < dim; ++row) {
      // Entries sorted by column for deterministic layout.
      std::vector<std::pair<std::uint64_t, Complex>> entries;
      entries.reserve(groups_.size());
      for (const auto& g : groups_) {
        const std::uint64_t col = row ^ g.x_mask;
        const Complex v = group_value(g, col);
        if (v != Complex{}) entries.emplace_back(col, v);
      }
      std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [c, v] : entries) {
        cols_.push_back(static_cast<std::uint32_t>(c));
        values_.push_back(v);
      }
      row_ptr_[row + 1] = cols_.size();
    }
  }
}

Complex SparseHamiltonian::group_value(const Group& g, std::uint64_t col) const {
  Complex v{};
  for (const auto& [zm, coeff] : g.parts) v += (std::popcount(col & zm) & 1) ? -coeff : coeff;
  return v;
}

void SparseHamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const auto dim = static_cast<std::int64_t>(dimension());
  if (static_cast<std::int64_t>(in.size()) != dim || static_cast<std::int64_t>(out.size()) != dim) {
    throw std::invalid_argument("SparseHamiltonian::apply: size mismatch");
  }
  if (has_stored_matrix()) {
#pragma omp parallel for schedule(static) if (dim > kParallelThreshold)
    for (std::int64_t r = 0; r < dim; ++r) {
      Complex acc{};
      for (std::uint64_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) acc += values_[e] * in[cols_[e]];
      out[r] = acc;
    }
    return;
  }
#pragma omp parallel for schedule(static) if (dim > kParallelThreshold)
  for (std::int64_t r = 0; r < dim; ++r) {
    const auto row = static_cast<std::uint64_t>(r);
    Complex acc{};
    for (const auto& g : groups_) {
      const std::uint64_t col = row ^ g.x_mask;
      acc += group_value(g, col) * in[col];
    }
    out[r] = acc;
  }
}

double SparseHamiltonian::expectation(const StateVector& state) const {
  std::vector<Complex> hv(dimension());
  apply(state.amplitudes(), hv);
  Complex acc{};
  const auto a = state.amplitudes();
  for (std::size_t i = 0; i < hv.size(); ++i) acc += std::conj(a[i]) * hv[i];
  return acc.real();
}

Complex SparseHamiltonian::element(std::uint64_t row, std::uint64_t col) const {
  Complex v{};
  for (const auto& g : groups_) {
    if ((row ^ g.x_mask) == col) v += group_value(g, col);
  }
  return v;
}

std::vector<Complex> SparseHamiltonian::to_dense() const {
  if (num_qubits_ > kMaxDenseQubits) {
    throw ResourceError("dense matrix limited to " + std::to_string(kMaxDenseQubits) + " qubits");
  }
  const std::size_t dim = dimension();
  std::vector<Complex> m(dim * dim);
  for (std::uint64_t row = 0; row < dim; ++row) {
    for (const auto& g : groups_) {
      const std::uint64_t col = row ^ g.x_mask;
      m[row * dim + col] += group_value(g, col);
    }
  }
  return m;
}

SparseHamiltonian build_hamiltonian(const ModelParams& params, ModelKind model, const LatticeSpec& lattice) {
  params.validate(lattice);
  if (model == ModelKind::kZ2Protected && params.protection_v != 0.0 &&
      static_cast<int>(params.protection_seq.size()) != lattice.n_matter()) {
    throw ConfigError("protected model needs one c_i per site");
  }
  return SparseHamiltonian(lattice.num_qubits(), pauli_term_list(params, lattice, model));
}

// ---------------------------------------------------------------------------
// Lanczos propagation

namespace {

double norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

// Coefficients of exp(-i T tau) e_1 in the Lanczos basis.
Eigen::VectorXcd krylov_coefficients(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig, double tau) {
  const auto& s = eig.eigenvectors();
  const auto& lambda = eig.eigenvalues();
  Eigen::VectorXcd phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases[k] = std::polar(1.0, -lambda[k] * tau) * s(0, k);
  }
  return s.cast<Complex>() * phases;
}

}  // namespace

StateVector evolve_exact(const StateVector& state, const SparseHamiltonian& h, double t,
                         const KrylovOptions& options) {
  if (state.num_qubits() != h.num_qubits()) throw std::invalid_argument("evolve_exact: size mismatch");
  if (!std::isfinite(t)) throw std::invalid_argument("evolve_exact: non-finite time");
  StateVector out = state;
  if (t == 0.0) return out;

  const int m_max = options.krylov_dim > 0 ? options.krylov_dim : 20;
  const std::size_t dim = h.dimension();
  const double direction = t > 0 ? 1.0 : -1.0;
  double remaining = std::abs(t);
  double trial = remaining;
  int substeps = 0;

  // Columns hold the Lanczos vectors.
  Eigen::MatrixXcd basis(static_cast<Eigen::Index>(dim), m_max);
  Eigen::VectorXcd w(static_cast<Eigen::Index>(dim));
  auto col_span = [&](Eigen::Index k) { return std::span<const Complex>(basis.col(k).data(), dim); };

  while (remaining > 0.0) {
    if (++substeps > options.max_substeps) throw ToleranceError("evolve_exact: too many substeps");
    auto psi = out.mutable_amplitudes();
    const double beta0 = norm(psi);
    if (beta0 == 0.0) return out;
    basis.col(0) = Eigen::Map<const Eigen::VectorXcd>(psi.data(), static_cast<Eigen::Index>(dim)) / beta0;

    std::vector<double> alpha;
    std::vector<double> beta;
    bool invariant = false;
    double beta_last = 0.0;
    for (int j = 0; j < m_max; ++j) {
      h.apply(col_span(j), std::span<Complex>(w.data(), dim));
      const double a = basis.col(j).dot(w).real();
      alpha.push_back(a);
      w -= a * basis.col(j);
      if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
      // One reorthogonalization pass; a second one only after heavy cancellation.
      for (int pass = 0; pass < 2; ++pass) {
        const double before = w.norm();
        const auto v = basis.leftCols(j + 1);
        w -= v * (v.adjoint() * w);
        if (w.norm() > 0.7 * before) break;
      }
      const double b = w.norm();
      if (b < 1e-12 * std::max(1.0, std::abs(a))) {
        invariant = true;
        break;
      }
      if (j + 1 == m_max) {
        beta_last = b;
        break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) tri(k, k) = alpha[k];
    for (Eigen::Index k = 0; k + 1 < m; ++k) tri(k, k + 1) = tri(k + 1, k) = beta[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);

    // An invariant subspace is exact for any time.
    double tau = invariant ? remaining : std::min(trial, remaining);
    bool shrunk = false;
    Eigen::VectorXcd coeff;
    while (true) {
      coeff = krylov_coefficients(eig, direction * tau);
      if (invariant) break;
      const double err = beta0 * beta_last * std::abs(coeff[m - 1]);
      if (err <= options.tolerance) break;
      tau *= 0.5;
      shrunk = true;
      if (tau < 1e-12 * std::abs(t)) throw ToleranceError("evolve_exact: step size underflow");
    }

    Eigen::Map<Eigen::VectorXcd>(psi.data(), static_cast<Eigen::Index>(dim)) =
        beta0 * (basis.leftCols(m) * coeff);
    remaining -= tau;
    if (remaining < 1e-14 * std::abs(t)) remaining = 0.0;
    trial = shrunk ? tau : tau * 1.5;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trotter error study

namespace {

double mean_link_x(const StateVector& s, const LatticeSpec& lattice) {
  double acc = 0.0;
  for (int l = 0; l < lattice.n_links(); ++l) acc += s.expect_pauli(PauliString{{lattice.link_qubit(l), Pauli::X}});
  return acc / lattice.n_links();
}

}  // namespace

std::vector<TrotterErrorPoint> trotter_error_study(const ModelParams& params, const LatticeSpec& lattice,
                                                   const std::vector<double>& dt_grid, double t_f) {
  params.validate(lattice);
  if (!(t_f > 0.0)) throw ConfigError("trotter study: t_f must be positive");
  const ModelKind model = params.protection_v != 0.0 ? ModelKind::kZ2Protected : ModelKind::kZ2;
  const SparseHamiltonian h = build_hamiltonian(params, model, lattice);
  const ProductState init = build_initial_state(InitialStateKind::kHalfFilling, lattice);

  StateVector start(lattice.num_qubits());
  apply_sequence(state_preparation_gates(init, lattice), start);

  std::vector<TrotterErrorPoint> out;
  for (double dt : dt_grid) {
    if (!(dt > 0.0)) throw ConfigError("trotter study: dt must be positive");
    const int m = static_cast<int>(std::floor(t_f / dt + 1e-9));
    if (m < 1) throw ConfigError("trotter study: dt larger than t_f");
    ModelParams p = params;
    p.dt = dt;
    const FusedSequence step = fuse_gates(merge_z_rotations(trotter_step_gates(p, lattice)));

    StateVector trotter = start;
    StateVector exact = start;
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) {
      apply_fused(step, trotter);
      exact = evolve_exact(exact, h, dt);
      acc += std::abs(mean_link_x(trotter, lattice) - mean_link_x(exact, lattice));
    }
    out.push_back({dt, m, acc / m});
  }
  return out;
}

double loglog_slope(const std::vector<TrotterErrorPoint>& points, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : points) {
    if (p.dt < lo - 1e-12 || p.dt > hi + 1e-12 || p.delta_e <= 0.0) continue;
    const double x = std::log(p.dt);
    const double y = std::log(p.delta_e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("loglog_slope: need at least two points in range");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gaugesim
