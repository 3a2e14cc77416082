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

#ifndef GAUGESIM_LATTICE_H_
#define GAUGESIM_LATTICE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gaugesim/pauli.h"

namespace gaugesim {

enum class Boundary { kOpen, kPeriodic };

/// Qubit k holds matter site k/2 for even k and the link (k/2, k/2+1) for
/// odd k. Periodic chains close with the link (N-1, 0) on qubit 2N-1.
class LatticeSpec {
 public:
  LatticeSpec(int n_matter, Boundary boundary);

  int n_matter() const { return n_matter_; }
  int n_links() const;
  int num_qubits() const;
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::kPeriodic; }

  int matter_qubit(int site) const;
  /// Link (site, site+1); for periodic chains site N-1 closes the ring.
  int link_qubit(int site) const;
  bool is_matter_qubit(int qubit) const { return qubit % 2 == 0; }

  /// Links touching `site`: left is (site-1, site), right is (site, site+1).
  /// Returns -1 where an open chain has no such link.
  int left_link_of(int site) const;
  int right_link_of(int site) const;

  /// Number of hopping bonds; equal to n_links().
  int n_bonds() const { return n_links(); }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  int n_matter_;
  Boundary boundary_;
};

/// Exact rational number, used for protection sequences so that compliance
/// can be decided without floating-point tolerance.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);
  static Rational parse(std::string_view text);
  /// Best approximation with denominator <= 10^6.
  static Rational from_double(double x);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class ModelKind { kZ2, kU1, kZ2Protected };

struct ModelParams {
  double j = 1.0;
  double f = 0.0;
  double mu = 0.0;
  double protection_v = 0.0;
  std::vector<Rational> protection_seq;
  double dt = 0.2;
  int n_steps = 0;

  /// Throws ConfigError on violated invariants.
  void validate(const LatticeSpec& lattice) const;
  std::vector<double> protection_seq_values() const;
};

/// Eigenvalues of the Z2 and U(1) Gauss-law generators, one per matter site.
struct GaugeSector {
  std::vector<int> g_z2;
  std::vector<int> g_u1;
  friend bool operator==(const GaugeSector&, const GaugeSector&) = default;
};

/// Classical product state: sigma^z per matter site and tau^x per link.
struct ProductState {
  std::vector<int> matter_z;
  std::vector<int> gauge_x;
  friend bool operator==(const ProductState&, const ProductState&) = default;
};

enum class InitialStateKind { kDefect, kHalfFilling, kPsi3 };

ProductState build_initial_state(InitialStateKind kind, const LatticeSpec& lattice);

/// g_z2[i] = -tau^x_{i-1,i} sigma^z_i tau^x_{i,i+1},
/// g_u1[i] = (tau^x_{i-1,i} - tau^x_{i,i+1} + sigma^z_i + (-1)^i) / 2.
/// Missing links at open edges contribute +1.
GaugeSector gauge_sector_of(const ProductState& state, const LatticeSpec& lattice);

/// Per-site spectrum of G_i^{U(1)} over product eigenstates.
std::vector<int> u1_spectrum(const LatticeSpec& lattice, int site);

enum class DeviationDomain { kPhysicalSpectrum, kSymmetricInteger };

inline constexpr int kMaxComplianceSites = 8;

/// True iff sum_i c_i delta_i = 0 has no solution with delta != 0.
/// Exhaustive; throws ResourceError for more than kMaxComplianceSites sites.
bool check_compliance(const std::vector<Rational>& c, const LatticeSpec& lattice,
                      const GaugeSector& target,
                      DeviationDomain domain = DeviationDomain::kSymmetricInteger);

/// The Hamiltonian of `model` as weighted Pauli strings on the qubit layout.
/// Constant offsets are dropped.
std::vector<PauliTerm> pauli_term_list(const ModelParams& params,
                                       const LatticeSpec& lattice, ModelKind model);

/// Gauss-law generators as Pauli sums. The U(1) generator keeps its constant
/// as a term on the empty string; open-edge truncations follow
/// gauge_sector_of.
std::vector<PauliTerm> z2_generator(const LatticeSpec& lattice, int site);
std::vector<PauliTerm> u1_generator(const LatticeSpec& lattice, int site);

/// Protection term V sum_i c_i G_i^{U(1)} without its constant part.
std::vector<PauliTerm> protection_terms(const ModelParams& params,
                                        const LatticeSpec& lattice);

/// (-1)^i
inline int stagger(int site) { return site % 2 == 0 ? 1 : -1; }

std::string_view to_string(Boundary b);
std::string_view to_string(ModelKind m);
std::string_view to_string(InitialStateKind k);
Boundary parse_boundary(std::string_view s);
ModelKind parse_model_kind(std::string_view s);
InitialStateKind parse_initial_state(std::string_view s);

}  // namespace gaugesim

#endif  // GAUGESIM_LATTICE_H_
