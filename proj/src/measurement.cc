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

#include "gaugesim/measurement.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "blocked_sum.h"
#include "gaugesim/circuit.h"
#include "gaugesim/errors.h"
#include "json.hpp"

namespace gaugesim {

namespace {

// Mean and standard error of per-shot samples.
template <typename Fn>
Estimate shot_mean(std::size_t n, Fn&& sample) {
  if (n < kMinRetainedShots) return Estimate::insufficient();
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double x = sample(s);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, (sum2 - sum * mean) / static_cast<double>(n - 1));
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

inline int eigen(std::uint64_t row, int qubit) { return ((row >> qubit) & 1U) ? -1 : 1; }

void check_target(const GaugeSector& target, const LatticeSpec& lattice) {
  if (static_cast<int>(target.g_z2.size()) != lattice.n_matter() ||
      static_cast<int>(target.g_u1.size()) != lattice.n_matter()) {
    throw ConfigError("target gauge sector does not match lattice");
  }
}

void check_register(const ShotTable& shots, const LatticeSpec& lattice) {
  if (shots.num_qubits != lattice.num_qubits()) throw ConfigError("shot table does not match lattice");
}

void check_register(const StateVector& state, const LatticeSpec& lattice) {
  if (state.num_qubits() != lattice.num_qubits()) throw ConfigError("state does not match lattice");
}

double expect_sum(const StateVector& state, const std::vector<PauliTerm>& terms) {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.coefficient * state.expect_pauli(t.string);
  return acc;
}

}  // namespace

void require_gauge_x_basis(const ShotTable& shots, const LatticeSpec& lattice) {
  if (shots.x_basis_mask != gauge_qubit_mask(lattice)) {
    throw ConfigError("shot table must be measured with links in the x basis");
  }
}

std::vector<int> gauss_z2_of_row(std::uint64_t row, const LatticeSpec& lattice) {
  std::vector<int> g(lattice.n_matter());
  for (int i = 0; i < lattice.n_matter(); ++i) {
    const int l = lattice.left_link_of(i);
    const int r = lattice.right_link_of(i);
    const int left = l < 0 ? 1 : eigen(row, l);
    const int right = r < 0 ? 1 : eigen(row, r);
    g[i] = -left * eigen(row, lattice.matter_qubit(i)) * right;
  }
  return g;
}

std::vector<int> gauss_u1_of_row(std::uint64_t row, const LatticeSpec& lattice) {
  std::vector<int> g(lattice.n_matter());
  for (int i = 0; i < lattice.n_matter(); ++i) {
    const int l = lattice.left_link_of(i);
    const int r = lattice.right_link_of(i);
    const int left = l < 0 ? 1 : eigen(row, l);
    const int right = r < 0 ? 1 : eigen(row, r);
    g[i] = (left - right + eigen(row, lattice.matter_qubit(i)) + stagger(i)) / 2;
  }
  return g;
}

std::vector<int> gauss_z2_per_shot(const ShotTable& shots, const LatticeSpec& lattice) {
  check_register(shots, lattice);
  require_gauge_x_basis(shots, lattice);
  std::vector<int> out;
  out.reserve(shots.size() * lattice.n_matter());
  for (auto row : shots.rows) {
    const auto g = gauss_z2_of_row(row, lattice);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

int total_charge_of_row(std::uint64_t row, const LatticeSpec& lattice) {
  int q = 0;
  for (int i = 0; i < lattice.n_matter(); ++i) q += eigen(row, lattice.matter_qubit(i));
  return q;
}

int total_charge_of(const GaugeSector& sector, const LatticeSpec& lattice) {
  int g = 0, s = 0;
  for (int i = 0; i < lattice.n_matter(); ++i) {
    g += sector.g_u1.at(i);
    s += stagger(i);
  }
  return 2 * g - s;
}

PostselectResult postselect(const ShotTable& shots, const LatticeSpec& lattice, const GaugeSector& target,
                            const PostselectCriteria& criteria) {
  check_register(shots, lattice);
  require_gauge_x_basis(shots, lattice);
  check_target(target, lattice);
  const int charge = total_charge_of(target, lattice);

  PostselectResult r;
  r.n_total = shots.size();
  r.retained.num_qubits = shots.num_qubits;
  r.retained.x_basis_mask = shots.x_basis_mask;
  std::size_t n_local = 0, n_charge = 0, n_both = 0;
  for (auto row : shots.rows) {
    const bool local_ok = gauss_z2_of_row(row, lattice) == target.g_z2;
    const bool charge_ok = total_charge_of_row(row, lattice) == charge;
    n_local += local_ok;
    n_charge += charge_ok;
    n_both += local_ok && charge_ok;
    if ((!criteria.local_gauss || local_ok) && (!criteria.global_charge || charge_ok)) {
      r.retained.rows.push_back(row);
    }
  }
  if (r.n_total > 0) {
    const auto n = static_cast<double>(r.n_total);
    r.fraction_local_gauss = static_cast<double>(n_local) / n;
    r.fraction_global_charge = static_cast<double>(n_charge) / n;
    r.fraction_both = static_cast<double>(n_both) / n;
    r.fraction_retained = static_cast<double>(r.retained.size()) / n;
  }
  r.insufficient = r.retained.size() < kMinRetainedShots;
  return r;
}

double electric_field_average(const StateVector& state, const LatticeSpec& lattice) {
  check_register(state, lattice);
  double acc = 0.0;
  for (int l = 0; l < lattice.n_links(); ++l) {
    acc += state.expect_pauli(PauliString{{lattice.link_qubit(l), Pauli::X}});
  }
  return acc / lattice.n_links();
}

Estimate electric_field_average(const ShotTable& shots, const LatticeSpec& lattice) {
  check_register(shots, lattice);
  require_gauge_x_basis(shots, lattice);
  const double inv = 1.0 / lattice.n_links();
  return shot_mean(shots.size(), [&](std::size_t s) {
    int acc = 0;
    for (int l = 0; l < lattice.n_links(); ++l) acc += eigen(shots.rows[s], lattice.link_qubit(l));
    return acc * inv;
  });
}

std::vector<PauliTerm> squared_deviation(const std::vector<PauliTerm>& generator, double target) {
  std::vector<PauliTerm> shifted = generator;
  bool has_constant = false;
  for (auto& t : shifted) {
    if (t.string.empty()) {
      t.coefficient -= target;
      has_constant = true;
    }
  }
  if (!has_constant) shifted.push_back({-target, PauliString{}});

  std::vector<std::pair<Complex, PauliString>> acc;
  for (const auto& a : shifted) {
    for (const auto& b : shifted) {
      auto [phase, s] = multiply(a.string, b.string);
      const Complex c = phase * a.coefficient * b.coefficient;
      auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& e) { return e.second == s; });
      if (it == acc.end()) {
        acc.emplace_back(c, std::move(s));
      } else {
        it->first += c;
      }
    }
  }
  std::vector<PauliTerm> out;
  for (auto& [c, s] : acc) {
    // Cross terms of commuting Hermitian strings are real; anticommuting ones cancel.
    if (std::abs(c) > 1e-15) out.push_back({c.real(), std::move(s)});
  }
  return out;
}

double eta_u1(const StateVector& state, const LatticeSpec& lattice, const GaugeSector& target) {
  check_register(state, lattice);
  check_target(target, lattice);
  double acc = 0.0;
  for (int i = 0; i < lattice.n_matter(); ++i) {
    acc += expect_sum(state, squared_deviation(u1_generator(lattice, i), target.g_u1[i]));
  }
  return acc / (kKappaU1 * lattice.n_matter());
}

double eta_z2(const StateVector& state, const LatticeSpec& lattice, const GaugeSector& target) {
  check_register(state, lattice);
  check_target(target, lattice);
  double acc = 0.0;
  for (int i = 0; i < lattice.n_matter(); ++i) {
    acc += expect_sum(state, squared_deviation(z2_generator(lattice, i), target.g_z2[i]));
  }
  return acc / (kKappaZ2 * lattice.n_matter());
}

Estimate eta_u1(const ShotTable& shots, const LatticeSpec& lattice, const GaugeSector& target) {
  check_register(shots, lattice);
  require_gauge_x_basis(shots, lattice);
  check_target(target, lattice);
  const double norm = 1.0 / (kKappaU1 * lattice.n_matter());
  return shot_mean(shots.size(), [&](std::size_t s) {
    const auto g = gauss_u1_of_row(shots.rows[s], lattice);
    double acc = 0.0;
    for (int i = 0; i < lattice.n_matter(); ++i) acc += (g[i] - target.g_u1[i]) * (g[i] - target.g_u1[i]);
    return acc * norm;
  });
}

Estimate eta_z2(const ShotTable& shots, const LatticeSpec& lattice, const GaugeSector& target) {
  check_register(shots, lattice);
  require_gauge_x_basis(shots, lattice);
  check_target(target, lattice);
  const double norm = 1.0 / (kKappaZ2 * lattice.n_matter());
  return shot_mean(shots.size(), [&](std::size_t s) {
    const auto g = gauss_z2_of_row(shots.rows[s], lattice);
    double acc = 0.0;
    for (int i = 0; i < lattice.n_matter(); ++i) acc += (g[i] - target.g_z2[i]) * (g[i] - target.g_z2[i]);
    return acc * norm;
  });
}

std::vector<double> site_resolved(const StateVector& state, const LatticeSpec& lattice) {
  check_register(state, lattice);
  std::vector<double> out(lattice.num_qubits());
  const auto z = state.expect_z_all();
  for (int q = 0; q < lattice.num_qubits(); ++q) {
    const double e = lattice.is_matter_qubit(q) ? z[q] : state.expect_pauli(PauliString{{q, Pauli::X}});
    out[q] = 0.5 * (1.0 + e);
  }
  return out;
}

std::vector<Estimate> site_resolved(const ShotTable& shots, const LatticeSpec& lattice) {
  check_register(shots, lattice);
  require_gauge_x_basis(shots, lattice);
  std::vector<Estimate> out;
  out.reserve(lattice.num_qubits());
  for (int q = 0; q < lattice.num_qubits(); ++q) {
    out.push_back(shot_mean(shots.size(), [&](std::size_t s) { return 0.5 * (1.0 + eigen(shots.rows[s], q)); }));
  }
  return out;
}

GaugeBasisObservables gauge_basis_observables(const StateVector& state, const LatticeSpec& lattice,
                                              const GaugeSector& target, bool site_resolved) {
  check_register(state, lattice);
  check_target(target, lattice);
  StateVector rotated = state;
  // Ry(-pi/2) on every link: tau^x = +1 reads as bit 0.
  const double r = std::sqrt(0.5);
  for (int l = 0; l < lattice.n_links(); ++l) rotated.apply_1q({r, r, -r, r}, lattice.link_qubit(l));

  const int n = lattice.n_matter();
  const int L = lattice.num_qubits();
  std::vector<int> left(n), right(n), matter(n);
  for (int i = 0; i < n; ++i) {
    left[i] = lattice.left_link_of(i);
    right[i] = lattice.right_link_of(i);
    matter[i] = lattice.matter_qubit(i);
  }
  const auto amps = rotated.amplitudes();
  const auto dim = static_cast<std::int64_t>(amps.size());
  const std::size_t nsite = site_resolved ? static_cast<std::size_t>(L) : 0;
  const auto sum = detail::blocked_sum(dim, 3 + nsite, [&](std::int64_t k, double* acc) {
    const double p = std::norm(amps[static_cast<std::size_t>(k)]);
    if (p == 0.0) return;
    const auto row = static_cast<std::uint64_t>(k);
    int links = 0;
    for (int l = 0; l < lattice.n_links(); ++l) links += eigen(row, lattice.link_qubit(l));
    int dz = 0, du = 0;
    for (int i = 0; i < n; ++i) {
      const int a = left[i] < 0 ? 1 : eigen(row, left[i]);
      const int b = right[i] < 0 ? 1 : eigen(row, right[i]);
      const int z = eigen(row, matter[i]);
      const int gz = -a * z * b - target.g_z2[i];
      const int gu = (a - b + z + static_cast<int>(stagger(i))) / 2 - target.g_u1[i];
      dz += gz * gz;
      du += gu * gu;
    }
    acc[0] += p * links;
    acc[1] += p * dz;
    acc[2] += p * du;
    for (std::size_t q = 0; q < nsite; ++q) {
      if (((row >> q) & 1U) == 0) acc[3 + q] += p;
    }
  });
  const double e = sum[0], z2 = sum[1], u1 = sum[2];
  std::vector<double> ones(sum.begin() + 3, sum.end());
  GaugeBasisObservables out;
  out.e = e / lattice.n_links();
  out.eta_z2 = z2 / (kKappaZ2 * n);
  out.eta_u1 = u1 / (kKappaU1 * n);
  out.site = std::move(ones);
  return out;
}

// ---------------------------------------------------------------------------
// ObservableSeries

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void ObservableSeries::add(int step, double t, std::string name, Estimate estimate,
                           std::optional<double> retained_fraction) {
  records_.push_back({step, t, std::move(name), estimate, retained_fraction});
}

std::vector<std::optional<double>> ObservableSeries::values(const std::string& name) const {
  std::vector<std::optional<double>> out;
  for (const auto& r : records_) {
    if (r.name == name) out.push_back(r.estimate.value);
  }
  return out;
}

std::vector<double> ObservableSeries::times(const std::string& name) const {
  std::vector<double> out;
  for (const auto& r : records_) {
    if (r.name == name) out.push_back(r.t);
  }
  return out;
}

std::string ObservableSeries::to_csv() const {
  std::ostringstream os;
  os << "step,t,observable,value,stderr,retained_fraction\n";
  for (const auto& r : records_) {
    os << r.step << ',' << format_double(r.t) << ',' << r.name << ',';
    if (r.estimate.value) os << format_double(*r.estimate.value);
    os << ',';
    if (r.estimate.value) os << format_double(r.estimate.std_error);
    os << ',';
    if (r.retained_fraction) os << format_double(*r.retained_fraction);
    os << '\n';
  }
  return os.str();
}

std::string ObservableSeries::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records_) {
    nlohmann::ordered_json j;
    j["step"] = r.step;
    j["t"] = r.t;
    j["observable"] = r.name;
    j["value"] = r.estimate.value ? nlohmann::ordered_json(*r.estimate.value) : nlohmann::ordered_json(nullptr);
    j["stderr"] = r.estimate.value ? nlohmann::ordered_json(r.estimate.std_error) : nlohmann::ordered_json(nullptr);
    j["retained_fraction"] =
        r.retained_fraction ? nlohmann::ordered_json(*r.retained_fraction) : nlohmann::ordered_json(nullptr);
    arr.push_back(std::move(j));
  }
  return arr.dump(1);
}

}  // namespace gaugesim
