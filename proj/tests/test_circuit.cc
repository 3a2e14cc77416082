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

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "gaugesim/circuit.h"
#include "gaugesim/noise.h"
#include "support/oracle.h"

#ifndef GAUGESIM_TEST_DATA_DIR
#define GAUGESIM_TEST_DATA_DIR "."
#endif

namespace gaugesim {
namespace {

using oracle::Mat;
using oracle::Vec;

// exp(-i alpha (sigma_i^+ tau_j^z sigma_k^- + h.c.)) from ladder operators.
Mat ujk_reference(double alpha, int i, int j, int k, int L) {
  Mat term = oracle::embed_ops({{i, oracle::sigma_plus()}, {j, oracle::pauli('Z')}, {k, oracle::sigma_minus()}}, L);
  return oracle::evolve(Mat(term + term.adjoint()), alpha);
}

TEST(NativeGate, MatricesMatchDefinitions) {
  auto m2 = [](const Matrix2& m) {
    Mat out(2, 2);
    out << m[0], m[1], m[2], m[3];
    return out;
  };
  auto m4 = [](const Matrix4& m) {
    Mat out(4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) out(r, c) = m[r * 4 + c];
    }
    return out;
  };
  EXPECT_LT((m2(NativeGate::rz(0, 0.7).matrix1()) - oracle::rz(0.7)).norm(), 1e-14);
  EXPECT_LT((m2(NativeGate::rxy(0, 0.3, -1.2).matrix1()) - oracle::rxy(0.3, -1.2)).norm(), 1e-14);
  EXPECT_LT((m2(NativeGate::rx(0, 0.9).matrix1()) - oracle::rxy(0, 0.9)).norm(), 1e-14);
  EXPECT_LT((m2(NativeGate::ry(0, 0.9).matrix1()) - oracle::rxy(oracle::kPi / 2, 0.9)).norm(), 1e-14);
  EXPECT_LT((m4(NativeGate::sqrt_iswap_dag(0, 1).matrix2()) - oracle::sqrt_iswap_dag()).norm(), 1e-14);
  EXPECT_LT((m4(NativeGate::cphase_residual(0, 1, 0.138).matrix2()) - oracle::cphase(0.138)).norm(), 1e-14);
}

TEST(Synthesis, SqrtISwapFromNative) {
  GateSequence s = sqrt_iswap_from_native(0, 1);
  Mat ref = oracle::evolve(Mat(oracle::kron(oracle::pauli('X'), oracle::pauli('X')) +
                               oracle::kron(oracle::pauli('Y'), oracle::pauli('Y'))),
                           -oracle::kPi / 8);
  EXPECT_LT(oracle::phase_distance(oracle::sequence_unitary(s, 2), ref), 1e-12);
}

TEST(Synthesis, ZeroAngleIsIdentity) {
  Mat u = oracle::sequence_unitary(synthesize_ujk(0.0, 0, 1, 2), 3);
  EXPECT_LT(oracle::phase_distance(u, Mat::Identity(8, 8)), 1e-10);
}

TEST(Synthesis, TrotterAngleMatchesExponential) {
  GateSequence s = synthesize_ujk(0.2, 0, 1, 2);
  EXPECT_LT(oracle::phase_distance(oracle::sequence_unitary(s, 3), ujk_reference(0.2, 0, 1, 2, 3)), 1e-10);
  // The tracked global phase makes the product exact, not just up to phase.
  EXPECT_LT(oracle::opnorm(oracle::sequence_unitary(s, 3) - ujk_reference(0.2, 0, 1, 2, 3)), 1e-10);
}

TEST(Synthesis, RandomAnglesAndLayouts) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ad(-oracle::kPi, oracle::kPi);
  const std::array<int, 3> layouts[] = {{0, 1, 2}, {2, 1, 0}, {4, 3, 0}, {1, 4, 2}};
  for (int n = 0; n < 10; ++n) {
    const double a = ad(rng);
    for (const auto& [i, j, k] : layouts) {
      GateSequence s = synthesize_ujk(a, i, j, k);
      EXPECT_LT(oracle::phase_distance(oracle::sequence_unitary(s, 5), ujk_reference(a, i, j, k, 5)), 1e-10);
    }
  }
}

TEST(Synthesis, SixTwoQubitGatesAndOnlyZRotations) {
  GateSequence s = synthesize_ujk(0.37, 0, 1, 2);
  int two = 0;
  for (const auto& g : s.gates) {
    if (g.is_two_qubit()) {
      ++two;
      EXPECT_EQ(g.kind, GateKind::kSqrtISwapDag);
    } else {
      EXPECT_EQ(g.kind, GateKind::kRz);
    }
  }
  EXPECT_EQ(two, 6);
}

TEST(Synthesis, RepeatedIndicesRejected) {
  EXPECT_THROW(synthesize_ujk(0.1, 0, 0, 2), std::invalid_argument);
  EXPECT_THROW(synthesize_ujk(0.1, 0, 1, 0), std::invalid_argument);
}

TEST(MergeZ, PreservesUnitaryAndShrinks) {
  GateSequence s;
  s.gates = {NativeGate::rz(0, 0.3), NativeGate::rz(0, 0.4), NativeGate::rz(1, 0.2),
             NativeGate::sqrt_iswap_dag(0, 1), NativeGate::rz(1, -0.2), NativeGate::rz(1, 0.2),
             NativeGate::rx(0, 0.5), NativeGate::rz(0, 2 * oracle::kPi)};
  GateSequence m = merge_z_rotations(s);
  EXPECT_LT(m.gates.size(), s.gates.size());
  EXPECT_LT(oracle::opnorm(oracle::sequence_unitary(m, 2) - oracle::sequence_unitary(s, 2)), 1e-12);
}

TEST(Schedule, DisjointGatesShareAMoment) {
  GateSequence s;
  s.gates = {NativeGate::sqrt_iswap_dag(0, 1), NativeGate::sqrt_iswap_dag(2, 3)};
  Circuit c = schedule_moments(s, 4);
  EXPECT_EQ(c.moments().size(), 1u);
  EXPECT_EQ(c.two_qubit_depth(), 1);
}

TEST(Schedule, SharedQubitKeepsOrder) {
  GateSequence s;
  s.gates = {NativeGate::sqrt_iswap_dag(0, 1), NativeGate::rx(1, 0.3)};
  Circuit c = schedule_moments(s, 2);
  ASSERT_EQ(c.moments().size(), 2u);
  EXPECT_EQ(c.moments()[0].gates[0].kind, GateKind::kSqrtISwapDag);
  EXPECT_EQ(c.moments()[1].gates[0].kind, GateKind::kRxy);
}

std::map<int, std::vector<NativeGate>> per_qubit(const std::vector<NativeGate>& gates) {
  std::map<int, std::vector<NativeGate>> out;
  for (const auto& g : gates) {
    out[g.qubits[0]].push_back(g);
    if (g.is_two_qubit()) out[g.qubits[1]].push_back(g);
  }
  return out;
}

TEST(Schedule, PerQubitOrderAndUnitaryPreserved) {
  LatticeSpec lat(3, Boundary::kOpen);
  ModelParams p;
  p.f = 0.6;
  p.mu = 0.4;
  p.dt = 0.25;
  GateSequence seq = merge_z_rotations(trotter_step_gates(p, lat));
  Circuit c = schedule_moments(seq, lat.num_qubits());
  c.check_valid();
  EXPECT_EQ(per_qubit(c.flatten().gates), per_qubit(seq.gates));
  EXPECT_LT(oracle::opnorm(oracle::circuit_unitary(c) - oracle::sequence_unitary(seq, lat.num_qubits())), 1e-12);
}

TEST(Circuit, OverlappingMomentRejected) {
  Circuit c(3);
  c.add_moment({{NativeGate::rz(0, 0.1), NativeGate::sqrt_iswap_dag(0, 1)}});
  EXPECT_THROW(c.check_valid(), std::logic_error);
}

TEST(TrotterStep, DepthOnEightSiteRing) {
  LatticeSpec lat(8, Boundary::kPeriodic);
  ModelParams p;
  p.f = 0.75;
  p.mu = 0.35;
  p.dt = 0.3;
  std::vector<int> depth;
  for (int n = 0; n <= 4; ++n) {
    p.n_steps = n;
    depth.push_back(build_experiment_circuit(InitialStateKind::kHalfFilling, p, lat, MeasureBasis::kGaugeX)
                        .two_qubit_depth());
  }
  // Steps overlap in the schedule; each further step adds eight layers.
  for (int n = 1; n < 4; ++n) EXPECT_EQ(depth[n + 1] - depth[n], 8);
  p.n_steps = 25;
  Circuit full = build_experiment_circuit(InitialStateKind::kHalfFilling, p, lat, MeasureBasis::kGaugeX);
  EXPECT_EQ(full.two_qubit_depth(), 202);
  EXPECT_EQ(full.counts().two_qubit, 25 * 8 * 6);
  // Versus twelve layers if the two bond parities did not overlap.
  EXPECT_LT(build_trotter_step(p, lat).two_qubit_depth(), 12);
}

TEST(TrotterStep, BareHoppingWhenOtherTermsVanish) {
  LatticeSpec lat(4, Boundary::kPeriodic);
  ModelParams p;
  p.dt = 0.2;
  GateSequence s = trotter_step_gates(p, lat);
  int two = 0;
  for (const auto& g : s.gates) {
    EXPECT_NE(g.kind, GateKind::kRxy);
    two += g.is_two_qubit();
  }
  EXPECT_EQ(two, 6 * lat.n_bonds());
}

struct StepCase {
  int n;
  Boundary b;
  double v;
};

class StepOracle : public ::testing::TestWithParam<StepCase> {};

// exp(-i H_f dt) exp(-i H_m dt) exp(-i H_odd dt) exp(-i H_even dt), with
// the protection term split into its matter and link parts.
Mat step_reference(const LatticeSpec& lat, const ModelParams& p) {
  auto geo = oracle::geometry(lat);
  const int L = lat.num_qubits();
  const auto dim = std::size_t{1} << L;
  Mat even = Mat::Zero(dim, dim), odd = Mat::Zero(dim, dim);
  for (int b = 0; b < lat.n_bonds(); ++b) (b % 2 == 0 ? even : odd) += p.j * oracle::bond_hopping(geo, b);
  Mat hz = oracle::mass_term(geo, p.mu);
  Mat hx = oracle::field_term(geo, p.f);
  if (p.protection_v != 0) {
    const auto c = p.protection_seq_values();
    Mat hg = oracle::protection_term(geo, p.protection_v, c);
    Mat matter = Mat::Zero(dim, dim);
    for (int i = 0; i < lat.n_matter(); ++i) matter += 0.5 * p.protection_v * c[i] * oracle::pstring({{2 * i, 'Z'}}, L);
    hz += matter;
    hx += hg - matter;
  }
  return oracle::evolve(hx, p.dt) * oracle::evolve(hz, p.dt) * oracle::evolve(odd, p.dt) * oracle::evolve(even, p.dt);
}

ModelParams step_params(const LatticeSpec& lat, double v) {
  ModelParams p;
  p.j = 1.1;
  p.f = 0.8;
  p.mu = 0.55;
  p.dt = 0.23;
  p.protection_v = v;
  if (v != 0) {
    for (int i = 0; i < lat.n_matter(); ++i) p.protection_seq.emplace_back(stagger(i) * (i + 3), 2 * lat.n_matter() + 3);
  }
  return p;
}

TEST_P(StepOracle, StepMatchesProductOfExponentials) {
  LatticeSpec lat(GetParam().n, GetParam().b);
  ModelParams p = step_params(lat, GetParam().v);
  Mat u = oracle::circuit_unitary(build_trotter_step(p, lat));
  EXPECT_LT(oracle::phase_distance(u, step_reference(lat, p)), 1e-9);
}

TEST_P(StepOracle, CompiledStepIsGaugeInvariant) {
  LatticeSpec lat(GetParam().n, GetParam().b);
  ModelParams p = step_params(lat, GetParam().v);
  Mat u = oracle::circuit_unitary(build_trotter_step(p, lat));
  auto geo = oracle::geometry(lat);
  for (int i = 0; i < lat.n_matter(); ++i) {
    Mat g = oracle::z2_generator(geo, i);
    EXPECT_LT(oracle::opnorm(u * g - g * u), 1e-9) << "site " << i;
  }
}

TEST_P(StepOracle, MassAndFieldLayersCommute) {
  LatticeSpec lat(GetParam().n, GetParam().b);
  ModelParams p = step_params(lat, GetParam().v);
  GateSequence z, x;
  const GateSequence step = trotter_step_gates(p, lat);
  for (const auto& g : step.gates) {
    if (g.kind == GateKind::kRxy) x.gates.push_back(g);
  }
  for (const auto& g : step.gates) {
    if (g.kind == GateKind::kRz && lat.is_matter_qubit(g.qubits[0])) z.gates.push_back(g);
  }
  const int L = lat.num_qubits();
  Mat a = oracle::sequence_unitary(z, L), b = oracle::sequence_unitary(x, L);
  EXPECT_LT(oracle::opnorm(a * b - b * a), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(SmallLattices, StepOracle,
                         ::testing::Values(StepCase{3, Boundary::kOpen, 0.0}, StepCase{3, Boundary::kOpen, 2.0},
                                           StepCase{2, Boundary::kPeriodic, 0.0},
                                           StepCase{4, Boundary::kPeriodic, 0.0},
                                           StepCase{4, Boundary::kPeriodic, 6.0},
                                           StepCase{5, Boundary::kOpen, 1.5}),
                         [](const auto& info) {
                           const StepCase& c = info.param;
                           return "N" + std::to_string(c.n) + "_" + std::string(to_string(c.b)) + "_" + std::to_string(info.index);
                         });

// Gauge invariance on the 12-qubit ring via random probe states.
TEST(TrotterStep, SixSiteRingCommutesWithGenerators) {
  LatticeSpec lat(6, Boundary::kPeriodic);
  ModelParams p;
  p.f = 2.5;
  p.mu = 2.5;
  p.dt = 0.2;
  p.protection_v = 6;
  p.protection_seq = {Rational(-115, 146), Rational(116, 146), Rational(-118, 146),
                      Rational(122, 146),  Rational(-130, 146), Rational(1)};
  Circuit step = build_trotter_step(p, lat);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 6; ++i) {
    Vec psi = oracle::random_state(12, rng);
    StateVector a = oracle::from_vec(psi);
    apply_circuit(step, a);
    PauliString g{{lat.matter_qubit(i), Pauli::Z}, {lat.left_link_of(i), Pauli::X}, {lat.right_link_of(i), Pauli::X}};
    // <psi| U^dag G U |psi> - <psi| G |psi> vanishes for every state iff [U, G] = 0 on average; use
    // the stronger check U G psi = G U psi.
    StateVector gpsi = oracle::from_vec(psi);
    for (const auto& [q, op] : g.ops()) {
      if (op == Pauli::Z) {
        gpsi.apply_1q({1, 0, 0, -1}, q);
      } else {
        gpsi.apply_1q({0, 1, 1, 0}, q);
      }
    }
    apply_circuit(step, gpsi);
    StateVector ga = a;
    for (const auto& [q, op] : g.ops()) {
      if (op == Pauli::Z) {
        ga.apply_1q({1, 0, 0, -1}, q);
      } else {
        ga.apply_1q({0, 1, 1, 0}, q);
      }
    }
    double d = 0;
    for (std::size_t k = 0; k < ga.size(); ++k) d = std::max(d, std::abs(ga[k] - gpsi[k]));
    EXPECT_LT(d, 1e-9) << "site " << i;
  }
}

TEST(TrotterStep, FirstOrderErrorScaling) {
  for (auto [n, b] : {std::pair{3, Boundary::kOpen}, std::pair{2, Boundary::kPeriodic}}) {
    LatticeSpec lat(n, b);
    auto geo = oracle::geometry(lat);
    ModelParams p;
    p.f = 0.9;
    p.mu = 0.6;
    oracle::Couplings k{p.j, p.f, p.mu, 0.0, {}};
    Mat h = oracle::hamiltonian(geo, oracle::Model::kZ2, k);
    double err[2];
    for (int r = 0; r < 2; ++r) {
      p.dt = r == 0 ? 0.1 : 0.05;
      Mat u = oracle::circuit_unitary(build_trotter_step(p, lat));
      err[r] = oracle::phase_distance(u, oracle::evolve(h, p.dt));
    }
    EXPECT_GE(err[0] / err[1], 3.5);
  }
}

TEST(ExperimentCircuit, ZeroStepsPreparesPsi3) {
  LatticeSpec lat(4, Boundary::kPeriodic);
  ModelParams p;
  Circuit c = build_experiment_circuit(InitialStateKind::kPsi3, p, lat, MeasureBasis::kComputational);
  EXPECT_EQ(c.two_qubit_depth(), 0);
  StateVector s(lat.num_qubits());
  apply_circuit(c, s);
  ProductState ps = build_initial_state(InitialStateKind::kPsi3, lat);
  Vec ref = oracle::product_state(oracle::geometry(lat), ps.matter_z, ps.gauge_x);
  EXPECT_NEAR(std::abs(ref.dot(oracle::to_vec(s))), 1.0, 1e-12);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.expect_pauli(PauliString{{lat.matter_qubit(i), Pauli::Z}}), ps.matter_z[i], 1e-12);
    EXPECT_NEAR(s.expect_pauli(PauliString{{lat.link_qubit(i), Pauli::X}}), ps.gauge_x[i], 1e-12);
  }
}

TEST(ExperimentCircuit, GaugeBasisReadoutMapsPlusToZero) {
  LatticeSpec lat(3, Boundary::kOpen);
  ModelParams p;
  Circuit c = build_experiment_circuit(InitialStateKind::kDefect, p, lat, MeasureBasis::kGaugeX);
  StateVector s(lat.num_qubits());
  apply_circuit(c, s);
  // defect: matter (+1,-1,+1), links +1 -> bits only on matter qubit 2
  EXPECT_NEAR(std::norm(s[0b00100]), 1.0, 1e-12);
  EXPECT_EQ(gauge_qubit_mask(lat), 0b01010u);
}

TEST(ExperimentCircuit, FigureOneCircuit) {
  LatticeSpec lat(11, Boundary::kOpen);
  ModelParams p;
  p.f = 0.2;
  p.dt = 0.2;
  p.n_steps = 25;
  Circuit c = build_experiment_circuit(InitialStateKind::kDefect, p, lat, MeasureBasis::kGaugeX);
  c.check_valid();
  EXPECT_EQ(c.num_qubits(), 21);
  EXPECT_EQ(c.counts().two_qubit, 25 * 10 * 6);
}

TEST(ExperimentCircuit, FigureThreeProtectedCircuit) {
  LatticeSpec lat(6, Boundary::kPeriodic);
  ModelParams p;
  p.f = 2.5;
  p.mu = 2.5;
  p.dt = 0.2;
  p.n_steps = 3;
  p.protection_v = 6;
  p.protection_seq = {Rational(-115, 146), Rational(116, 146), Rational(-118, 146),
                      Rational(122, 146),  Rational(-130, 146), Rational(1)};
  Circuit c = build_experiment_circuit(InitialStateKind::kPsi3, p, lat, MeasureBasis::kGaugeX);
  c.check_valid();
  EXPECT_EQ(c.num_qubits(), 12);
  EXPECT_EQ(c.counts().two_qubit, 3 * 6 * 6);
}

TEST(TextFormat, GoldenSmallCircuit) {
  LatticeSpec lat(2, Boundary::kOpen);
  ModelParams p;
  p.f = 0.5;
  p.mu = 0.25;
  p.dt = 0.2;
  p.n_steps = 1;
  const std::string text =
      build_experiment_circuit(InitialStateKind::kDefect, p, lat, MeasureBasis::kGaugeX).to_text();
  std::ifstream in(std::string(GAUGESIM_TEST_DATA_DIR) + "/golden/defect_n2_open_one_step.txt");
  ASSERT_TRUE(in) << "golden file missing";
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(text, golden.str());
}

TEST(Fusion, MatchesGateByGateApplication) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> qd(0, 4);
  std::uniform_real_distribution<double> ang(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    GateSequence s;
    s.global_phase = ang(rng);
    for (int g = 0; g < 40; ++g) {
      const int a = qd(rng);
      int b = qd(rng);
      if (b == a) b = (a + 1) % 5;
      switch (g % 4) {
        case 0: s.gates.push_back(NativeGate::rz(a, ang(rng))); break;
        case 1: s.gates.push_back(NativeGate::rxy(a, ang(rng), ang(rng))); break;
        case 2: s.gates.push_back(NativeGate::sqrt_iswap_dag(a, b)); break;
        default: s.gates.push_back(NativeGate::cphase_residual(a, b, ang(rng))); break;
      }
    }
    Vec psi = oracle::random_state(5, rng);
    StateVector x = oracle::from_vec(psi), y = oracle::from_vec(psi);
    apply_sequence(s, x);
    apply_fused(fuse_gates(s), y);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_LT(std::abs(x[k] - y[k]), 1e-12);
  }
}

}  // namespace
}  // namespace gaugesim
