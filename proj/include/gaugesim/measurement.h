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

#ifndef GAUGESIM_MEASUREMENT_H_
#define GAUGESIM_MEASUREMENT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gaugesim/lattice.h"
#include "gaugesim/shots.h"
#include "gaugesim/statevector.h"

namespace gaugesim {

/// Estimators need at least this many (retained) shots.
inline constexpr std::size_t kMinRetainedShots = 100;
inline constexpr double kKappaU1 = 9.0;
inline constexpr double kKappaZ2 = 4.0;

/// A value with its standard error; `value` is empty when there were too few
/// shots to estimate it.
struct Estimate {
  std::optional<double> value;
  double std_error = 0.0;

  bool valid() const { return value.has_value(); }
  static Estimate exact(double v) { return {v, 0.0}; }
  static Estimate insufficient() { return {}; }
};

/// Throws ConfigError unless exactly the link qubits were read in the x basis.
void require_gauge_x_basis(const ShotTable& shots, const LatticeSpec& lattice);

/// Z2 Gauss-law eigenvalues per shot, flattened row-major (shot, site).
std::vector<int> gauss_z2_per_shot(const ShotTable& shots, const LatticeSpec& lattice);
std::vector<int> gauss_z2_of_row(std::uint64_t row, const LatticeSpec& lattice);
std::vector<int> gauss_u1_of_row(std::uint64_t row, const LatticeSpec& lattice);
/// sum_i sigma^z_i of one shot.
int total_charge_of_row(std::uint64_t row, const LatticeSpec& lattice);
/// sum_i sigma^z_i implied by a U(1) sector; link terms telescope.
int total_charge_of(const GaugeSector& sector, const LatticeSpec& lattice);

struct PostselectCriteria {
  bool local_gauss = true;
  bool global_charge = false;
};

struct PostselectResult {
  ShotTable retained;
  std::size_t n_total = 0;
  double fraction_local_gauss = 0.0;
  double fraction_global_charge = 0.0;
  double fraction_both = 0.0;
  /// Fraction kept under the requested criteria.
  double fraction_retained = 0.0;
  bool insufficient = false;
};

/// Keeps shots whose Z2 Gauss law matches `target.g_z2` (local_gauss) and/or
/// whose total charge matches the one implied by `target.g_u1`
/// (global_charge). All three fractions are always reported.
PostselectResult postselect(const ShotTable& shots, const LatticeSpec& lattice, const GaugeSector& target,
                            const PostselectCriteria& criteria);

/// Link-averaged <tau^x>.
double electric_field_average(const StateVector& state, const LatticeSpec& lattice);
Estimate electric_field_average(const ShotTable& shots, const LatticeSpec& lattice);

/// (1 / (kappa N)) sum_i <(G_i - g_i)^2> for the U(1) (kappa = 9) and Z2
/// (kappa = 4) generators.
double eta_u1(const StateVector& state, const LatticeSpec& lattice, const GaugeSector& target);
Estimate eta_u1(const ShotTable& shots, const LatticeSpec& lattice, const GaugeSector& target);
double eta_z2(const StateVector& state, const LatticeSpec& lattice, const GaugeSector& target);
Estimate eta_z2(const ShotTable& shots, const LatticeSpec& lattice, const GaugeSector& target);

/// (1 + sigma^z)/2 on matter qubits and (1 + tau^x)/2 on link qubits,
/// indexed by qubit.
std::vector<double> site_resolved(const StateVector& state, const LatticeSpec& lattice);
std::vector<Estimate> site_resolved(const ShotTable& shots, const LatticeSpec& lattice);

/// (G - g)^2 expanded into Pauli strings; the constant sits on the empty string.
/// All diagonal observables at once from the gauge-basis probabilities of
/// `state`; equal to the per-observable functions above up to rounding.
struct GaugeBasisObservables {
  double e = 0.0;
  double eta_z2 = 0.0;
  double eta_u1 = 0.0;
  /// Empty unless requested.
  std::vector<double> site;
};

GaugeBasisObservables gauge_basis_observables(const StateVector& state, const LatticeSpec& lattice,
                                              const GaugeSector& target, bool site_resolved = false);

std::vector<PauliTerm> squared_deviation(const std::vector<PauliTerm>& generator, double target);

struct ObservableRecord {
  int step = 0;
  double t = 0.0;
  std::string name;
  Estimate estimate;
  std::optional<double> retained_fraction;
};

/// Long-format table of observables against Trotter step.
class ObservableSeries {
 public:
  void add(int step, double t, std::string name, Estimate estimate,
           std::optional<double> retained_fraction = std::nullopt);
  void add_exact(int step, double t, std::string name, double value) {
    add(step, t, std::move(name), Estimate::exact(value));
  }

  const std::vector<ObservableRecord>& records() const { return records_; }
  /// Values of one observable in step order; empty optionals where flagged.
  std::vector<std::optional<double>> values(const std::string& name) const;
  std::vector<double> times(const std::string& name) const;

  /// Columns: step,t,observable,value,stderr,retained_fraction. Flagged
  /// values and absent fractions are written as empty fields.
  std::string to_csv() const;
  std::string to_json() const;

 private:
  std::vector<ObservableRecord> records_;
};

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace gaugesim

#endif  // GAUGESIM_MEASUREMENT_H_
