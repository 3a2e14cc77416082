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

#include <random>

#include "gaugesim/errors.h"
#include "gaugesim/exact.h"
#include "support/oracle.h"

namespace gaugesim {
namespace {

using oracle::Mat;
using oracle::Vec;

Mat dense_of(const SparseHamiltonian& h) {
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  auto d = h.to_dense();
  Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = d[static_cast<std::size_t>(r * dim + c)];
  }
  return m;
}

// exp(-iHt) psi through the spectral decomposition; faster than expm at 10 qubits.
Vec spectral_evolve(const Mat& h, double t, const Vec& psi) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec c = es.eigenvectors().adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(Complex(0, -t * es.eigenvalues()(k)));
  return es.eigenvectors() * c;
}

StateVector product(const LatticeSpec& lat, const ProductState& ps) {
  return oracle::from_vec(oracle::product_state(oracle::geometry(lat), ps.matter_z, ps.gauge_x));
}

ModelParams protected_params(const LatticeSpec& lat) {
  ModelParams p;
  p.f = 0.7;
  p.mu = 0.45;
  p.protection_v = 3.0;
  for (int i = 0; i < lat.n_matter(); ++i) p.protection_seq.emplace_back(i % 2 == 0 ? 1 : -1);
  return p;
}

TEST(SparseHamiltonian, SingleBondHoppingBlock) {
  LatticeSpec lat(2, Boundary::kOpen);
  ModelParams p;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  Mat m = dense_of(h);
  EXPECT_EQ(m.rows(), 8);
  EXPECT_LT((m - oracle::bond_hopping(oracle::geometry(lat), 0)).norm(), 1e-14);
  // Hopping flips both matter qubits and nothing else.
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      if (std::abs(m(r, c)) > 0) EXPECT_EQ(r ^ c, 0b101);
    }
  }
}

TEST(SparseHamiltonian, FieldSpectrumIsEvenlySpaced) {
  LatticeSpec lat(3, Boundary::kPeriodic);
  ModelParams p;
  p.f = 0.4;
  std::vector<PauliTerm> field;
  const SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  for (const auto& t : h.terms()) {
    if (t.string.ops().size() == 1 && t.string.ops()[0].first % 2 == 1) field.push_back(t);
  }
  ASSERT_EQ(field.size(), 3u);
  Eigen::SelfAdjointEigenSolver<Mat> es(oracle::from_terms(field, lat.num_qubits()));
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double e = es.eigenvalues()(k);
    const double steps = (e + 3 * 0.4) / (2 * 0.4);
    EXPECT_NEAR(steps, std::round(steps), 1e-12);
    EXPECT_LE(std::abs(e), 3 * 0.4 + 1e-12);
  }
  EXPECT_NEAR(es.eigenvalues()(0), -1.2, 1e-12);
}

TEST(SparseHamiltonian, BlockedChargesInPsi3) {
  LatticeSpec lat(4, Boundary::kPeriodic);
  ModelParams p;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kU1, lat);
  EXPECT_NEAR(h.expectation(product(lat, build_initial_state(InitialStateKind::kPsi3, lat))), 0.0, 1e-14);
}

struct ModelCase {
  int n;
  Boundary b;
  ModelKind kind;
};

class DenseMatch : public ::testing::TestWithParam<ModelCase> {};

TEST_P(DenseMatch, MatchesKroneckerOracleAndIsHermitian) {
  const auto [n, b, kind] = GetParam();
  LatticeSpec lat(n, b);
  ModelParams p = protected_params(lat);
  if (kind != ModelKind::kZ2Protected) p.protection_v = 0.0;
  SparseHamiltonian h = build_hamiltonian(p, kind, lat);
  Mat m = dense_of(h);
  EXPECT_EQ((m - m.adjoint()).norm(), 0.0);
  EXPECT_LT((m - oracle::from_terms(h.terms(), lat.num_qubits())).norm(), 1e-12);
  const oracle::Model om = kind == ModelKind::kZ2   ? oracle::Model::kZ2
                           : kind == ModelKind::kU1 ? oracle::Model::kU1
                                                    : oracle::Model::kZ2Protected;
  Mat ref = oracle::hamiltonian(oracle::geometry(lat), om, {p.j, p.f, p.mu, p.protection_v, p.protection_seq_values()});
  const auto dim = m.rows();
  const Mat id = Mat::Identity(dim, dim);
  // Constant offsets are not part of the term list.
  Mat a = m - (m.trace() / double(dim)) * id, r = ref - (ref.trace() / double(dim)) * id;
  EXPECT_LT((a - r).norm(), 1e-12);
  // Matrix-free and stored application agree with the dense matrix.
  std::mt19937_64 rng(31);
  Vec psi = oracle::random_state(lat.num_qubits(), rng);
  std::vector<Complex> in(psi.data(), psi.data() + psi.size()), out(in.size());
  h.apply(in, out);
  Vec want = m * psi;
  for (std::size_t k = 0; k < out.size(); ++k) EXPECT_LT(std::abs(out[k] - want(static_cast<Eigen::Index>(k))), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Models, DenseMatch,
                         ::testing::Values(ModelCase{2, Boundary::kOpen, ModelKind::kZ2},
                                           ModelCase{3, Boundary::kOpen, ModelKind::kU1},
                                           ModelCase{3, Boundary::kPeriodic, ModelKind::kZ2},
                                           ModelCase{4, Boundary::kPeriodic, ModelKind::kU1},
                                           ModelCase{4, Boundary::kPeriodic, ModelKind::kZ2Protected},
                                           ModelCase{5, Boundary::kOpen, ModelKind::kZ2Protected}),
                         [](const auto& info) {
                           const ModelCase& c = info.param;
                           return "N" + std::to_string(c.n) + "_" + std::string(to_string(c.b)) + "_" + std::string(to_string(c.kind));
                         });

TEST(SparseHamiltonian, MatrixFreeAboveStorageCap) {
  LatticeSpec lat(9, Boundary::kOpen);  // 17 qubits
  ModelParams p;
  p.f = 0.3;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  EXPECT_FALSE(h.has_stored_matrix());
  LatticeSpec small(8, Boundary::kPeriodic);
  EXPECT_TRUE(build_hamiltonian(p, ModelKind::kZ2, small).has_stored_matrix());
  StateVector s = product(lat, build_initial_state(InitialStateKind::kDefect, lat));
  // Product state: only the diagonal field term contributes, and tau^x = +1 on every link.
  EXPECT_NEAR(h.expectation(s), 0.3 * lat.n_links(), 1e-12);
  EXPECT_EQ(h.element(0b001, 0b100), std::conj(h.element(0b100, 0b001)));
  EXPECT_NE(std::abs(h.element(0b001, 0b100)), 0.0);
}

TEST(SparseHamiltonian, SizeCaps) {
  ModelParams p;
  EXPECT_THROW(build_hamiltonian(p, ModelKind::kZ2, LatticeSpec(13, Boundary::kOpen)), ResourceError);
  EXPECT_THROW(build_hamiltonian(p, ModelKind::kZ2, LatticeSpec(7, Boundary::kPeriodic)).to_dense(), ResourceError);
}

TEST(EvolveExact, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(32);
  LatticeSpec lat(3, Boundary::kPeriodic);
  ModelParams p;
  p.f = 0.5;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  Vec psi = oracle::random_state(6, rng);
  Vec out = oracle::to_vec(evolve_exact(oracle::from_vec(psi), h, 0.0));
  EXPECT_LT((out - psi).norm(), 1e-15);
}

TEST(EvolveExact, EigenstateOnlyPicksUpPhase) {
  LatticeSpec lat(3, Boundary::kOpen);
  ModelParams p;
  p.f = 0.8;
  p.mu = 0.3;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  Eigen::SelfAdjointEigenSolver<Mat> es(dense_of(h));
  Vec v = es.eigenvectors().col(3);
  const double e = es.eigenvalues()(3);
  Vec out = oracle::to_vec(evolve_exact(oracle::from_vec(v), h, 2.7));
  EXPECT_LT((out - std::exp(Complex(0, -e * 2.7)) * v).norm(), 1e-9);
}

TEST(EvolveExact, MatchesDenseExponentialAtEightQubits) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> td(0.1, 5.0);
  LatticeSpec lat(4, Boundary::kPeriodic);
  ModelParams p = protected_params(lat);
  p.protection_v = 0;
  p.protection_seq.clear();
  for (ModelKind kind : {ModelKind::kZ2, ModelKind::kU1}) {
    SparseHamiltonian h = build_hamiltonian(p, kind, lat);
    Mat m = dense_of(h);
    for (int trial = 0; trial < 3; ++trial) {
      const double t = td(rng);
      Vec psi = oracle::random_state(8, rng);
      Vec out = oracle::to_vec(evolve_exact(oracle::from_vec(psi), h, t));
      EXPECT_LT((out - oracle::evolve(m, t) * psi).norm(), 1e-8);
    }
  }
}

TEST(EvolveExact, MatchesDenseExponentialAtTenQubits) {
  std::mt19937_64 rng(34);
  LatticeSpec lat(5, Boundary::kPeriodic);
  ModelParams p = protected_params(lat);
  p.protection_seq = {Rational(3, 7), Rational(-2, 7), Rational(5, 7), Rational(-1, 7), Rational(1)};
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2Protected, lat);
  Vec psi = oracle::random_state(10, rng);
  Vec out = oracle::to_vec(evolve_exact(oracle::from_vec(psi), h, 3.3));
  EXPECT_LT((out - spectral_evolve(dense_of(h), 3.3, psi)).norm(), 1e-8);
  EXPECT_NEAR(out.norm(), 1.0, 1e-9);
}

TEST(EvolveExact, NegativeTimeReverses) {
  std::mt19937_64 rng(35);
  LatticeSpec lat(3, Boundary::kPeriodic);
  ModelParams p;
  p.f = 1.1;
  p.mu = 0.2;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  Vec psi = oracle::random_state(6, rng);
  StateVector fwd = evolve_exact(oracle::from_vec(psi), h, 4.0);
  EXPECT_LT((oracle::to_vec(evolve_exact(fwd, h, -4.0)) - psi).norm(), 1e-8);
}

TEST(EvolveExact, CompositionOfTimes) {
  std::mt19937_64 rng(36);
  LatticeSpec lat(4, Boundary::kOpen);
  ModelParams p;
  p.f = 0.6;
  p.mu = 0.9;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  StateVector psi = oracle::from_vec(oracle::random_state(lat.num_qubits(), rng));
  Vec one = oracle::to_vec(evolve_exact(psi, h, 3.5));
  Vec two = oracle::to_vec(evolve_exact(evolve_exact(psi, h, 1.2), h, 2.3));
  EXPECT_LT((one - two).norm(), 1e-8);
}

TEST(EvolveExact, RejectsMismatchedState) {
  ModelParams p;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, LatticeSpec(2, Boundary::kOpen));
  EXPECT_THROW(evolve_exact(StateVector(4), h, 1.0), std::invalid_argument);
}

TEST(EvolveExact, SubstepBudgetExhaustionIsReported) {
  LatticeSpec lat(3, Boundary::kPeriodic);
  ModelParams p;
  p.f = 50.0;
  SparseHamiltonian h = build_hamiltonian(p, ModelKind::kZ2, lat);
  std::mt19937_64 rng(37);
  KrylovOptions opt;
  opt.krylov_dim = 4;
  opt.max_substeps = 2;
  EXPECT_THROW(evolve_exact(oracle::from_vec(oracle::random_state(6, rng)), h, 100.0, opt), ToleranceError);
}

struct InvariantCase {
  int n;
  Boundary b;
  ModelKind kind;
  InitialStateKind init;
};

class ExactInvariants : public ::testing::TestWithParam<InvariantCase> {};

TEST_P(ExactInvariants, GaugeChargesAndEnergyAreConserved) {
  const auto [n, b, kind, init] = GetParam();
  LatticeSpec lat(n, b);
  ModelParams p = protected_params(lat);
  if (kind != ModelKind::kZ2Protected) p.protection_v = 0.0;
  SparseHamiltonian h = build_hamiltonian(p, kind, lat);
  const ProductState ps = build_initial_state(init, lat);
  StateVector s = product(lat, ps);
  const double e0 = h.expectation(s);
  auto geo = oracle::geometry(lat);
  std::vector<Mat> gens;
  for (int i = 0; i < n; ++i) {
    gens.push_back(kind == ModelKind::kU1 ? oracle::u1_generator(geo, i) : oracle::z2_generator(geo, i));
  }
  std::vector<double> g0;
  for (const auto& g : gens) g0.push_back(oracle::expect(oracle::to_vec(s), g));
  for (int k = 0; k < 5; ++k) {
    s = evolve_exact(s, h, 0.9);
    EXPECT_NEAR(h.expectation(s), e0, 1e-9);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-9);
    const Vec v = oracle::to_vec(s);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(oracle::expect(v, gens[i]), g0[i], 1e-9) << "site " << i;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Models, ExactInvariants,
    ::testing::Values(InvariantCase{3, Boundary::kOpen, ModelKind::kZ2, InitialStateKind::kDefect},
                      InvariantCase{4, Boundary::kPeriodic, ModelKind::kZ2, InitialStateKind::kHalfFilling},
                      InvariantCase{4, Boundary::kPeriodic, ModelKind::kU1, InitialStateKind::kPsi3},
                      InvariantCase{5, Boundary::kOpen, ModelKind::kU1, InitialStateKind::kDefect},
                      InvariantCase{4, Boundary::kPeriodic, ModelKind::kZ2Protected, InitialStateKind::kPsi3},
                      InvariantCase{5, Boundary::kOpen, ModelKind::kZ2, InitialStateKind::kHalfFilling}),
    [](const auto& info) {
      const InvariantCase& c = info.param;
      return "N" + std::to_string(c.n) + "_" + std::string(to_string(c.b)) + "_" + std::string(to_string(c.kind)) + "_" + std::string(to_string(c.init));
    });

TEST(TrotterStudy, VanishesAsStepShrinks) {
  LatticeSpec lat(4, Boundary::kPeriodic);
  ModelParams p;
  p.f = 0.75;
  p.mu = 0.35;
  auto pts = trotter_error_study(p, lat, {0.01}, 2.0);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].steps, 200);
  EXPECT_LT(pts[0].delta_e, 1e-4);
}

TEST(TrotterStudy, QuadraticAtSmallSteps) {
  LatticeSpec lat(4, Boundary::kPeriodic);
  ModelParams p;
  p.f = 0.75;
  p.mu = 0.35;
  auto pts = trotter_error_study(p, lat, {0.05, 0.1, 0.2, 0.4}, 10.0);
  EXPECT_NEAR(loglog_slope(pts, 0.05, 0.4), 2.0, 0.15);
  for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_GT(pts[k].delta_e, pts[k - 1].delta_e);
}

TEST(TrotterStudy, StepCountRoundsDown) {
  LatticeSpec lat(2, Boundary::kPeriodic);
  ModelParams p;
  p.f = 0.5;
  auto pts = trotter_error_study(p, lat, {0.3, 0.7}, 1.0);
  EXPECT_EQ(pts[0].steps, 3);
  EXPECT_EQ(pts[1].steps, 1);
  EXPECT_THROW(trotter_error_study(p, lat, {2.0}, 1.0), ConfigError);
  EXPECT_THROW(trotter_error_study(p, lat, {-0.1}, 1.0), ConfigError);
}

TEST(TrotterStudy, SlopeOfExactPowerLaw) {
  std::vector<TrotterErrorPoint> pts;
  for (double dt : {0.05, 0.1, 0.2, 0.4, 0.8}) pts.push_back({dt, 1, 3.0 * dt * dt * dt});
  EXPECT_NEAR(loglog_slope(pts, 0.05, 0.4), 3.0, 1e-12);
  EXPECT_THROW(loglog_slope(pts, 0.5, 0.6), std::invalid_argument);
}

}  // namespace
}  // namespace gaugesim
