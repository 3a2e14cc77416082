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

#include "gaugesim/circuit.h"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace gaugesim {

using std::numbers::pi;

Matrix2 NativeGate::matrix1() const {
  switch (kind) {
    case GateKind::kRz:
      return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
    case GateKind::kRxy: {
      const double c = std::cos(angle / 2);
      const double s = std::sin(angle / 2);
      const Complex mi{0.0, -1.0};
      return {c, mi * s * std::polar(1.0, -axis), mi * s * std::polar(1.0, axis), c};
    }
    default:
      throw std::logic_error("matrix1 called on a two-qubit gate");
  }
}

Matrix4 NativeGate::matrix2() const {
  Matrix4 m{};
  switch (kind) {
    case GateKind::kSqrtISwapDag: {
      const double r = std::numbers::sqrt2 / 2;
      m[0] = 1.0;
      m[5] = r;
      m[6] = Complex{0.0, -r};
      m[9] = Complex{0.0, -r};
      m[10] = r;
      m[15] = 1.0;
      return m;
    }
    case GateKind::kCPhaseResidual:
      m[0] = m[5] = m[10] = 1.0;
      m[15] = std::polar(1.0, -angle);
      return m;
    default:
      throw std::logic_error("matrix2 called on a single-qubit gate");
  }
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kSqrtISwapDag: return "sqrt_iswap_dag";
    case GateKind::kRz: return "rz";
    case GateKind::kRxy: return "rxy";
    case GateKind::kCPhaseResidual: return "cphase";
  }
  return "?";
}

void GateSequence::append(const GateSequence& other) {
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  global_phase += other.global_phase;
}

// ---------------------------------------------------------------------------
// Circuit

void Circuit::add_moment(Moment m) { moments_.push_back(std::move(m)); }

int Circuit::two_qubit_depth() const {
  int depth = 0;
  for (const auto& m : moments_) {
    for (const auto& g : m.gates) {
      if (g.kind == GateKind::kSqrtISwapDag) {
        ++depth;
        break;
      }
    }
  }
  return depth;
}

GateCounts Circuit::counts() const {
  GateCounts c;
  for (const auto& m : moments_) {
    for (const auto& g : m.gates) {
      switch (g.kind) {
        case GateKind::kSqrtISwapDag: ++c.two_qubit; break;
        case GateKind::kRz: ++c.rz; break;
        case GateKind::kRxy: ++c.rxy; break;
        case GateKind::kCPhaseResidual: ++c.cphase_residual; break;
      }
    }
  }
  return c;
}

GateSequence Circuit::flatten() const {
  GateSequence seq;
  seq.global_phase = global_phase_;
  for (const auto& m : moments_) seq.gates.insert(seq.gates.end(), m.gates.begin(), m.gates.end());
  return seq;
}

void Circuit::check_valid() const {
  for (std::size_t mi = 0; mi < moments_.size(); ++mi) {
    std::vector<int> owner(num_qubits_, -1);
    const auto& gates = moments_[mi].gates;
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      const auto& g = gates[gi];
      const bool attached = g.kind == GateKind::kCPhaseResidual && gi > 0 &&
                            gates[gi - 1].kind == GateKind::kSqrtISwapDag &&
                            gates[gi - 1].qubits == g.qubits;
      for (int k = 0; k < g.arity(); ++k) {
        const int q = g.qubits[k];
        if (q < 0 || q >= num_qubits_) throw std::logic_error("circuit: qubit out of range");
        if (owner[q] >= 0 && !attached) {
          throw std::logic_error("circuit: overlapping gates in moment " + std::to_string(mi));
        }
        owner[q] = static_cast<int>(gi);
      }
    }
  }
}

namespace {

std::string fmt_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace

std::string Circuit::to_text() const {
  std::ostringstream os;
  os << "# qubits=" << num_qubits_ << " global_phase=" << fmt_double(global_phase_)
     << " moments=" << moments_.size() << " two_qubit_depth=" << two_qubit_depth() << '\n';
  for (const auto& m : moments_) {
    bool first = true;
    for (const auto& g : m.gates) {
      if (!first) os << ' ';
      first = false;
      os << gate_name(g.kind);
      switch (g.kind) {
        case GateKind::kRz:
        case GateKind::kCPhaseResidual:
          os << '(' << fmt_double(g.angle) << ')';
          break;
        case GateKind::kRxy:
          os << '(' << fmt_double(g.axis) << ',' << fmt_double(g.angle) << ')';
          break;
        case GateKind::kSqrtISwapDag:
          break;
      }
      os << '@' << g.qubits[0];
      if (g.is_two_qubit()) os << ',' << g.qubits[1];
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Compilation passes

GateSequence merge_z_rotations(const GateSequence& seq) {
  std::vector<std::optional<NativeGate>> out;
  out.reserve(seq.gates.size());
  std::vector<std::vector<std::size_t>> history;
  double phase = seq.global_phase;

  auto qubit_history = [&](int q) -> std::vector<std::size_t>& {
    if (q >= static_cast<int>(history.size())) history.resize(q + 1);
    return history[q];
  };

  for (const auto& g : seq.gates) {
    if (g.kind == GateKind::kRz) {
      auto& h = qubit_history(g.qubits[0]);
      if (!h.empty() && out[h.back()]->kind == GateKind::kRz) {
        NativeGate& prev = *out[h.back()];
        // Reduce into (-2 pi, 2 pi]; Rz has period 4 pi.
        double a = std::remainder(prev.angle + g.angle, 4 * pi);
        if (std::abs(std::abs(a) - 2 * pi) < 1e-12) {
          // Rz(2 pi) = -1.
          phase += pi;
          a = 0.0;
        }
        if (std::abs(a) < 1e-12) {
          out[h.back()].reset();
          h.pop_back();
        } else {
          prev.angle = a;
        }
        continue;
      }
      if (g.angle == 0.0) continue;
      out.emplace_back(g);
      h.push_back(out.size() - 1);
      continue;
    }
    out.emplace_back(g);
    for (int k = 0; k < g.arity(); ++k) qubit_history(g.qubits[k]).push_back(out.size() - 1);
  }

  GateSequence result;
  result.global_phase = std::remainder(phase, 2 * pi);
  for (auto& g : out) {
    if (g) result.gates.push_back(*g);
  }
  return result;
}

Circuit schedule_moments(const GateSequence& seq, int num_qubits) {
  Circuit circuit(num_qubits);
  circuit.set_global_phase(seq.global_phase);
  auto& moments = circuit.mutable_moments();
  std::vector<std::size_t> frontier(num_qubits, 0);
  for (std::size_t gi = 0; gi < seq.gates.size(); ++gi) {
    const auto& g = seq.gates[gi];
    for (int k = 0; k < g.arity(); ++k) {
      if (g.qubits[k] < 0 || g.qubits[k] >= num_qubits) {
        throw std::out_of_range("schedule_moments: qubit out of range");
      }
    }
    if (g.kind == GateKind::kCPhaseResidual && gi > 0) {
      const auto& prev = seq.gates[gi - 1];
      if (prev.kind == GateKind::kSqrtISwapDag && prev.qubits == g.qubits) {
        // Stays attached to its two-qubit gate.
        moments[frontier[g.qubits[0]] - 1].gates.push_back(g);
        continue;
      }
    }
    std::size_t m = 0;
    for (int k = 0; k < g.arity(); ++k) m = std::max(m, frontier[g.qubits[k]]);
    if (m >= moments.size()) moments.resize(m + 1);
    moments[m].gates.push_back(g);
    for (int k = 0; k < g.arity(); ++k) frontier[g.qubits[k]] = m + 1;
  }
  return circuit;
}

GateSequence sqrt_iswap_from_native(int a, int b) {
  GateSequence s;
  s.gates = {NativeGate::rz(a, pi / 2), NativeGate::rz(b, -pi / 2), NativeGate::sqrt_iswap_dag(a, b),
             NativeGate::rz(a, -pi / 2), NativeGate::rz(b, pi / 2)};
  return s;
}

GateSequence synthesize_ujk(double alpha, int i, int j, int k) {
  if (i == j || j == k || i == k) throw std::invalid_argument("synthesize_ujk: qubits must be distinct");
  if (i < 0 || j < 0 || k < 0) throw std::invalid_argument("synthesize_ujk: negative qubit index");
  GateSequence raw;
  auto iswap_ij = [&] {
    raw.append(sqrt_iswap_from_native(i, j));
    raw.append(sqrt_iswap_from_native(i, j));
  };
  // Application order (rightmost factor of the product first).
  iswap_ij();
  raw.gates.push_back(NativeGate::rz(j, pi / 4));
  raw.gates.push_back(NativeGate::rz(k, pi / 4));
  raw.append(sqrt_iswap_from_native(j, k));
  raw.gates.push_back(NativeGate::rz(j, pi - alpha));
  raw.gates.push_back(NativeGate::rz(k, alpha));
  raw.append(sqrt_iswap_from_native(j, k));
  raw.gates.push_back(NativeGate::rz(i, pi));
  raw.gates.push_back(NativeGate::rz(j, -pi / 4));
  raw.gates.push_back(NativeGate::rz(k, -pi / 4));
  iswap_ij();
  raw.global_phase = pi;
  return merge_z_rotations(raw);
}

GateSequence trotter_step_gates(const ModelParams& params, const LatticeSpec& lattice) {
  params.validate(lattice);
  const int n = lattice.n_matter();
  const double alpha = params.j * params.dt;
  GateSequence step;
  for (int parity : {0, 1}) {
    for (int b = parity; b < lattice.n_bonds(); b += 2) {
      step.append(synthesize_ujk(alpha, lattice.matter_qubit(b), lattice.link_qubit(b),
                                 lattice.matter_qubit((b + 1) % n)));
    }
  }
  const bool protect = params.protection_v != 0.0;
  const auto c = params.protection_seq_values();
  for (int i = 0; i < n; ++i) {
    double h = 0.5 * params.mu * stagger(i);
    if (protect) h += 0.5 * params.protection_v * c[i];
    if (h != 0.0) step.gates.push_back(NativeGate::rz(lattice.matter_qubit(i), 2.0 * h * params.dt));
  }
  for (int l = 0; l < lattice.n_links(); ++l) {
    double h = params.f;
    if (protect) h += 0.5 * params.protection_v * (c[(l + 1) % n] - c[l]);
    if (h != 0.0) step.gates.push_back(NativeGate::rx(lattice.link_qubit(l), 2.0 * h * params.dt));
  }
  return step;
}

Circuit build_trotter_step(const ModelParams& params, const LatticeSpec& lattice) {
  return schedule_moments(merge_z_rotations(trotter_step_gates(params, lattice)), lattice.num_qubits());
}

GateSequence state_preparation_gates(const ProductState& state, const LatticeSpec& lattice) {
  if (static_cast<int>(state.matter_z.size()) != lattice.n_matter() ||
      static_cast<int>(state.gauge_x.size()) != lattice.n_links()) {
    throw std::invalid_argument("state preparation: state does not match lattice");
  }
  GateSequence seq;
  for (int i = 0; i < lattice.n_matter(); ++i) {
    if (state.matter_z[i] < 0) seq.gates.push_back(NativeGate::rx(lattice.matter_qubit(i), pi));
  }
  for (int l = 0; l < lattice.n_links(); ++l) {
    seq.gates.push_back(NativeGate::ry(lattice.link_qubit(l), state.gauge_x[l] > 0 ? pi / 2 : -pi / 2));
  }
  return seq;
}

GateSequence measurement_rotation_gates(const LatticeSpec& lattice) {
  GateSequence seq;
  for (int l = 0; l < lattice.n_links(); ++l) seq.gates.push_back(NativeGate::ry(lattice.link_qubit(l), -pi / 2));
  return seq;
}

std::uint64_t gauge_qubit_mask(const LatticeSpec& lattice) {
  std::uint64_t m = 0;
  for (int l = 0; l < lattice.n_links(); ++l) m |= std::uint64_t{1} << lattice.link_qubit(l);
  return m;
}

Circuit build_experiment_circuit(InitialStateKind kind, const ModelParams& params,
                                 const LatticeSpec& lattice, MeasureBasis basis) {
  params.validate(lattice);
  GateSequence seq = state_preparation_gates(build_initial_state(kind, lattice), lattice);
  if (params.n_steps > 0) {
    const GateSequence step = trotter_step_gates(params, lattice);
    for (int s = 0; s < params.n_steps; ++s) seq.append(step);
  }
  if (basis == MeasureBasis::kGaugeX) seq.append(measurement_rotation_gates(lattice));
  return schedule_moments(merge_z_rotations(seq), lattice.num_qubits());
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

// 4x4 products in the subindex convention s = bit(q1) + 2 bit(q2).
Matrix4 mul4(const Matrix4& a, const Matrix4& b) {
  Matrix4 c{};
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) {
      const Complex x = a[r * 4 + k];
      if (x == Complex{}) continue;
      for (int col = 0; col < 4; ++col) c[r * 4 + col] += x * b[k * 4 + col];
    }
  }
  return c;
}

Matrix2 mul2(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

// Embeds a single-qubit matrix on subindex bit `pos`.
Matrix4 embed1(const Matrix2& u, int pos) {
  Matrix4 m{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const int other = 1 - pos;
      if (((r >> other) & 1) != ((c >> other) & 1)) continue;
      m[r * 4 + c] = u[((r >> pos) & 1) * 2 + ((c >> pos) & 1)];
    }
  }
  return m;
}

// Relabels a two-qubit matrix with its qubits swapped.
Matrix4 swap_order(const Matrix4& u) {
  auto sw = [](int s) { return ((s & 1) << 1) | (s >> 1); };
  Matrix4 m{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m[sw(r) * 4 + sw(c)] = u[r * 4 + c];
  }
  return m;
}

Matrix2 top_left(const Matrix4& m) { return {m[0], m[1], m[4], m[5]}; }

Matrix4 from2(const Matrix2& u) {
  Matrix4 m{};
  m[0] = u[0];
  m[1] = u[1];
  m[4] = u[2];
  m[5] = u[3];
  return m;
}

}  // namespace

FusedSequence fuse_gates(const GateSequence& seq) {
  FusedSequence out;
  out.global_phase = seq.global_phase;
  std::vector<FusedGate>& ops = out.gates;
  std::vector<bool> removed;
  std::vector<int> last;
  auto last_of = [&](int q) -> int& {
    if (q >= static_cast<int>(last.size())) last.resize(q + 1, -1);
    return last[q];
  };
  for (const NativeGate& g : seq.gates) {
    if (!g.is_two_qubit()) {
      const int q = g.qubits[0];
      const int l = last_of(q);
      const Matrix2 u = g.matrix1();
      if (l < 0) {
        ops.push_back({{q, -1}, from2(u)});
        removed.push_back(false);
        last_of(q) = static_cast<int>(ops.size()) - 1;
      } else if (ops[l].qubits[1] < 0) {
        ops[l].matrix = from2(mul2(u, top_left(ops[l].matrix)));
      } else {
        ops[l].matrix = mul4(embed1(u, ops[l].qubits[0] == q ? 0 : 1), ops[l].matrix);
      }
      continue;
    }
    const int a = g.qubits[0];
    const int b = g.qubits[1];
    const int la = last_of(a);
    const int lb = last_of(b);
    if (la >= 0 && la == lb) {
      FusedGate& op = ops[la];
      const Matrix4 u = op.qubits[0] == a ? g.matrix2() : swap_order(g.matrix2());
      op.matrix = mul4(u, op.matrix);
      continue;
    }
    Matrix4 m = g.matrix2();
    // Pull pending single-qubit blocks on a or b into the new block.
    for (int pos = 0; pos < 2; ++pos) {
      const int l = pos == 0 ? la : lb;
      if (l >= 0 && ops[l].qubits[1] < 0 && !removed[l]) {
        m = mul4(m, embed1(top_left(ops[l].matrix), pos));
        removed[l] = true;
      }
    }
    ops.push_back({{a, b}, m});
    removed.push_back(false);
    last_of(a) = last_of(b) = static_cast<int>(ops.size()) - 1;
  }
  std::vector<FusedGate> kept;
  kept.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!removed[i]) kept.push_back(ops[i]);
  }
  ops = std::move(kept);
  return out;
}

void apply_fused(const FusedSequence& fused, StateVector& state) {
  for (const FusedGate& g : fused.gates) {
    if (g.qubits[1] < 0) {
      state.apply_1q(top_left(g.matrix), g.qubits[0]);
    } else {
      state.apply_2q(g.matrix, g.qubits[0], g.qubits[1]);
    }
  }
  if (fused.global_phase != 0.0) state.scale(std::polar(1.0, fused.global_phase));
}

void apply_gate(const NativeGate& gate, StateVector& state) {
  if (gate.is_two_qubit()) {
    state.apply_2q(gate.matrix2(), gate.qubits[0], gate.qubits[1]);
  } else {
    state.apply_1q(gate.matrix1(), gate.qubits[0]);
  }
}

void apply_sequence(const GateSequence& seq, StateVector& state) {
  for (const auto& g : seq.gates) apply_gate(g, state);
  if (seq.global_phase != 0.0) state.scale(std::polar(1.0, seq.global_phase));
}

void apply_circuit(const Circuit& circuit, StateVector& state) {
  if (circuit.num_qubits() != state.num_qubits()) {
    throw std::invalid_argument("apply_circuit: register size mismatch");
  }
  for (const auto& m : circuit.moments()) {
    for (const auto& g : m.gates) apply_gate(g, state);
  }
  if (circuit.global_phase() != 0.0) state.scale(std::polar(1.0, circuit.global_phase()));
}

}  // namespace gaugesim
