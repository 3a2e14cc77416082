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

#include "gaugesim/lattice.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "gaugesim/errors.h"

namespace gaugesim {

LatticeSpec::LatticeSpec(int n_matter, Boundary boundary) : n_matter_(n_matter), boundary_(boundary) {
  if (n_matter < 2) throw ConfigError("lattice needs at least 2 matter sites");
}

int LatticeSpec::n_links() const { return periodic() ? n_matter_ : n_matter_ - 1; }

int LatticeSpec::num_qubits() const { return n_matter_ + n_links(); }

int LatticeSpec::matter_qubit(int site) const {
  if (site < 0 || site >= n_matter_) throw std::out_of_range("matter site out of range");
  return 2 * site;
}

int LatticeSpec::link_qubit(int site) const {
  if (site < 0 || site >= n_links()) throw std::out_of_range("link index out of range");
  return 2 * site + 1;
}

int LatticeSpec::left_link_of(int site) const {
  if (site > 0) return link_qubit(site - 1);
  return periodic() ? link_qubit(n_matter_ - 1) : -1;
}

int LatticeSpec::right_link_of(int site) const {
  if (site < n_links()) return link_qubit(site);
  return -1;
}

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw ConfigError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

namespace {

std::int64_t parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("cannot parse integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (text.find_first_of(".eE") != std::string_view::npos) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ConfigError("cannot parse number '" + std::string(text) + "'");
    }
    return from_double(x);
  }
  return Rational(parse_int(text));
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw ConfigError("non-finite rational");
  constexpr std::int64_t kMaxDen = 1'000'000;
  // Continued-fraction convergents.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t p2 = ai * p1 + p0;
    std::int64_t q2 = ai * q1 + q0;
    if (q2 > kMaxDen) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) < 1e-15 * std::max(1.0, std::abs(x))) break;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return Rational(p1, q1);
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------------------
// ModelParams

void ModelParams::validate(const LatticeSpec& lattice) const {
  for (double v : {j, f, mu, protection_v, dt}) {
    if (!std::isfinite(v)) throw ConfigError("model parameters must be finite");
  }
  if (!(j > 0.0)) throw ConfigError("j must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (n_steps < 0) throw ConfigError("n_steps must be non-negative");
  if (protection_v != 0.0 && static_cast<int>(protection_seq.size()) != lattice.n_matter()) {
    throw ConfigError("c_seq must have one entry per matter site when v != 0");
  }
  for (const auto& c : protection_seq) {
    if (std::abs(c.num) > c.den) throw ConfigError("c_seq entries must satisfy |c_i| <= 1");
  }
}

std::vector<double> ModelParams::protection_seq_values() const {
  std::vector<double> out;
  out.reserve(protection_seq.size());
  for (const auto& c : protection_seq) out.push_back(c.to_double());
  return out;
}

// ---------------------------------------------------------------------------
// States and sectors

ProductState build_initial_state(InitialStateKind kind, const LatticeSpec& lattice) {
  const int n = lattice.n_matter();
  ProductState s;
  s.matter_z.assign(n, 1);
  s.gauge_x.assign(lattice.n_links(), 1);
  switch (kind) {
    case InitialStateKind::kDefect:
      s.matter_z[n / 2] = -1;
      break;
    case InitialStateKind::kHalfFilling:
      if (lattice.periodic() && n % 2 != 0) {
        throw ConfigError("half_filling needs an even number of sites on a ring");
      }
      for (int i = 0; i < n; ++i) s.matter_z[i] = -stagger(i);
      break;
    case InitialStateKind::kPsi3:
      if (lattice.periodic() && n % 2 != 0) {
        throw ConfigError("psi3 needs an even number of sites on a ring");
      }
      for (int i = 0; i < n; ++i) s.matter_z[i] = stagger(i);
      // Link (i, i+1) points even -> odd when i is even.
      for (int l = 0; l < lattice.n_links(); ++l) s.gauge_x[l] = l % 2 == 0 ? -1 : 1;
      break;
  }
  return s;
}

namespace {

void check_dims(const ProductState& state, const LatticeSpec& lattice) {
  if (static_cast<int>(state.matter_z.size()) != lattice.n_matter() ||
      static_cast<int>(state.gauge_x.size()) != lattice.n_links()) {
    throw ConfigError("product state does not match lattice dimensions");
  }
}

}  // namespace

GaugeSector gauge_sector_of(const ProductState& state, const LatticeSpec& lattice) {
  check_dims(state, lattice);
  const int n = lattice.n_matter();
  GaugeSector g;
  g.g_z2.resize(n);
  g.g_u1.resize(n);
  for (int i = 0; i < n; ++i) {
    int left = lattice.left_link_of(i) < 0 ? 1 : state.gauge_x[lattice.left_link_of(i) / 2];
    int right = lattice.right_link_of(i) < 0 ? 1 : state.gauge_x[lattice.right_link_of(i) / 2];
    int sz = state.matter_z[i];
    g.g_z2[i] = -left * sz * right;
    g.g_u1[i] = (left - right + sz + stagger(i)) / 2;
  }
  return g;
}

std::vector<int> u1_spectrum(const LatticeSpec& lattice, int site) {
  const bool has_left = lattice.left_link_of(site) >= 0;
  const bool has_right = lattice.right_link_of(site) >= 0;
  std::vector<int> values;
  for (int left : {-1, 1}) {
    if (!has_left && left == -1) continue;
    for (int right : {-1, 1}) {
      if (!has_right && right == -1) continue;
      for (int sz : {-1, 1}) {
        int g = (left - right + sz + stagger(site)) / 2;
        if (std::find(values.begin(), values.end(), g) == values.end()) values.push_back(g);
      }
    }
  }
  std::sort(values.begin(), values.end());
  return values;
}

bool check_compliance(const std::vector<Rational>& c, const LatticeSpec& lattice,
                      const GaugeSector& target, DeviationDomain domain) {
  const int n = lattice.n_matter();
  if (static_cast<int>(c.size()) != n) throw ConfigError("compliance: sequence length != n_matter");
  if (n > kMaxComplianceSites) {
    throw ResourceError("compliance: exhaustive check limited to " +
                        std::to_string(kMaxComplianceSites) + " sites");
  }
  if (domain == DeviationDomain::kPhysicalSpectrum && static_cast<int>(target.g_u1.size()) != n) {
    throw ConfigError("compliance: target sector does not match lattice");
  }

  // Common denominator turns the condition into integer arithmetic.
  std::int64_t lcm = 1;
  for (const auto& r : c) lcm = std::lcm(lcm, r.den);
  std::vector<std::int64_t> weights(n);
  for (int i = 0; i < n; ++i) weights[i] = c[i].num * (lcm / c[i].den);

  std::vector<std::vector<std::int64_t>> deltas(n);
  for (int i = 0; i < n; ++i) {
    if (domain == DeviationDomain::kSymmetricInteger) {
      for (int d = -3; d <= 3; ++d) deltas[i].push_back(d);
    } else {
      for (int g : u1_spectrum(lattice, i)) deltas[i].push_back(g - target.g_u1[i]);
    }
  }

  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::int64_t sum = 0;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      std::int64_t d = deltas[i][idx[i]];
      sum += weights[i] * d;
      nonzero = nonzero || d != 0;
    }
    if (nonzero && sum == 0) return false;
    int k = 0;
    while (k < n && ++idx[k] == deltas[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Pauli expansions

namespace {

void add_term(std::vector<PauliTerm>& terms, double coefficient, PauliString s) {
  if (coefficient == 0.0) return;
  for (auto& t : terms) {
    if (t.string == s) {
      t.coefficient += coefficient;
      return;
    }
  }
  terms.push_back({coefficient, std::move(s)});
}

void drop_zeros(std::vector<PauliTerm>& terms) {
  std::erase_if(terms, [](const PauliTerm& t) { return t.coefficient == 0.0; });
}

}  // namespace

std::vector<PauliTerm> z2_generator(const LatticeSpec& lattice, int site) {
  PauliString s;
  if (int l = lattice.left_link_of(site); l >= 0) s.set(l, Pauli::X);
  s.set(lattice.matter_qubit(site), Pauli::Z);
  if (int r = lattice.right_link_of(site); r >= 0) s.set(r, Pauli::X);
  return {{-1.0, s}};
}

std::vector<PauliTerm> u1_generator(const LatticeSpec& lattice, int site) {
  std::vector<PauliTerm> terms;
  double constant = 0.5 * stagger(site);
  if (int l = lattice.left_link_of(site); l >= 0) {
    terms.push_back({0.5, PauliString{{l, Pauli::X}}});
  } else {
    constant += 0.5;
  }
  if (int r = lattice.right_link_of(site); r >= 0) {
    terms.push_back({-0.5, PauliString{{r, Pauli::X}}});
  } else {
    constant -= 0.5;
  }
  terms.push_back({0.5, PauliString{{lattice.matter_qubit(site), Pauli::Z}}});
  if (constant != 0.0) terms.push_back({constant, PauliString{}});
  return terms;
}

std::vector<PauliTerm> protection_terms(const ModelParams& params, const LatticeSpec& lattice) {
  std::vector<PauliTerm> terms;
  if (params.protection_v == 0.0) return terms;
  const auto c = params.protection_seq_values();
  const double v = params.protection_v;
  const int n = lattice.n_matter();
  for (int i = 0; i < n; ++i) {
    add_term(terms, 0.5 * v * c[i], PauliString{{lattice.matter_qubit(i), Pauli::Z}});
  }
  for (int l = 0; l < lattice.n_links(); ++l) {
    add_term(terms, 0.5 * v * (c[(l + 1) % n] - c[l]), PauliString{{lattice.link_qubit(l), Pauli::X}});
  }
  return terms;
}

std::vector<PauliTerm> pauli_term_list(const ModelParams& params, const LatticeSpec& lattice,
                                       ModelKind model) {
  std::vector<PauliTerm> terms;
  const int n = lattice.n_matter();
  const double hop = 0.5 * params.j;
  for (int b = 0; b < lattice.n_bonds(); ++b) {
    const int qi = lattice.matter_qubit(b);
    const int qj = lattice.link_qubit(b);
    const int qk = lattice.matter_qubit((b + 1) % n);
    add_term(terms, hop, PauliString{{qi, Pauli::X}, {qj, Pauli::Z}, {qk, Pauli::X}});
    add_term(terms, hop, PauliString{{qi, Pauli::Y}, {qj, Pauli::Z}, {qk, Pauli::Y}});
    if (model == ModelKind::kU1) {
      // sigma_i^+ (tau^z - i tau^y) sigma_k^- + h.c.
      add_term(terms, hop, PauliString{{qi, Pauli::Y}, {qj, Pauli::Y}, {qk, Pauli::X}});
      add_term(terms, -hop, PauliString{{qi, Pauli::X}, {qj, Pauli::Y}, {qk, Pauli::Y}});
    }
  }
  for (int l = 0; l < lattice.n_links(); ++l) {
    add_term(terms, params.f, PauliString{{lattice.link_qubit(l), Pauli::X}});
  }
  for (int i = 0; i < n; ++i) {
    add_term(terms, 0.5 * params.mu * stagger(i), PauliString{{lattice.matter_qubit(i), Pauli::Z}});
  }
  if (model == ModelKind::kZ2Protected) {
    for (auto& t : protection_terms(params, lattice)) add_term(terms, t.coefficient, t.string);
  }
  drop_zeros(terms);
  return terms;
}

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(Boundary b) { return b == Boundary::kOpen ? "open" : "periodic"; }

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::kZ2: return "z2";
    case ModelKind::kU1: return "u1";
    case ModelKind::kZ2Protected: return "z2_protected";
  }
  return "?";
}

std::string_view to_string(InitialStateKind k) {
  switch (k) {
    case InitialStateKind::kDefect: return "defect";
    case InitialStateKind::kHalfFilling: return "half_filling";
    case InitialStateKind::kPsi3: return "psi3";
  }
  return "?";
}

Boundary parse_boundary(std::string_view s) {
  if (s == "open") return Boundary::kOpen;
  if (s == "periodic") return Boundary::kPeriodic;
  throw ConfigError("unknown boundary '" + std::string(s) + "'");
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "z2") return ModelKind::kZ2;
  if (s == "u1") return ModelKind::kU1;
  if (s == "z2_protected") return ModelKind::kZ2Protected;
  throw ConfigError("unknown model '" + std::string(s) + "'");
}

InitialStateKind parse_initial_state(std::string_view s) {
  if (s == "defect") return InitialStateKind::kDefect;
  if (s == "half_filling") return InitialStateKind::kHalfFilling;
  if (s == "psi3") return InitialStateKind::kPsi3;
  throw ConfigError("unknown initial state '" + std::string(s) + "'");
}

}  // namespace gaugesim
