// Copyright 2026 The qsblab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qsblab/hilbert.hpp"
#include "test_util.hpp"

using namespace qsblab;

namespace {

SpaceLayout qubit(const std::string& label) { return SpaceLayout{{label, 2}}; }

CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("layout validation") {
  const SpaceLayout l{{"A", 2}, {"B", 3}};
  CHECK(l.total_dim() == 6);
  CHECK(l.index_of("B") == 1);
  CHECK(l.dim_of("B") == 3);
  CHECK_ERROR(SpaceLayout({{"A", 2}, {"A", 3}}), ErrorCode::kLabelClash);
  CHECK_ERROR(SpaceLayout({{"A", 0}}), ErrorCode::kBadLayout);
  CHECK_ERROR(SpaceLayout({{"", 2}}), ErrorCode::kBadLayout);
  CHECK_ERROR(l.index_of("C"), ErrorCode::kLabelUnknown);
  CHECK_ERROR(l.concat(SpaceLayout{{"B", 2}}), ErrorCode::kLabelClash);
  CHECK(l.concat(SpaceLayout{{"C", 4}}).total_dim() == 24);
  CHECK(SpaceLayout({{"A", 2}, {"B", 3}, {"C", 4}}).restrict_to({"C", "A"}).labels() ==
        std::vector<std::string>{"A", "C"});
}

TEST_CASE("pure and mixed state invariants") {
  CHECK_ERROR(PureState(qubit("A"), vec({1.0, 1.0})), ErrorCode::kNotNormalized);
  CHECK_ERROR(PureState(qubit("A"), vec({1.0})), ErrorCode::kLayoutMismatch);
  CHECK(PureState::normalized(qubit("A"), vec({1.0, 1.0})).amplitudes().norm() ==
        doctest::Approx(1.0));

  CMatrix not_herm(2, 2);
  not_herm << 0.5, 0.1, 0.0, 0.5;
  CHECK_ERROR(DensityMatrix(qubit("A"), not_herm), ErrorCode::kNotHermitian);
  CMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_ERROR(DensityMatrix(qubit("A"), neg), ErrorCode::kNotPsd);
  CMatrix bad_trace = CMatrix::Identity(2, 2);
  CHECK_ERROR(DensityMatrix(qubit("A"), bad_trace), ErrorCode::kNotNormalized);

  // An eigenvalue just below zero is clipped rather than rejected.
  CMatrix tiny(2, 2);
  tiny << 1.0 + 1e-11, 0.0, 0.0, -1e-11;
  const DensityMatrix clipped(qubit("A"), tiny);
  CHECK(clipped.matrix().real().minCoeff() >= 0.0);
  CHECK(std::abs(clipped.matrix().trace().real() - 1.0) < 1e-10);
}

TEST_CASE("tensor products follow the row-major convention") {
  const auto zero_a = PureState::basis(qubit("A"), 0);
  const auto zero_b = PureState::basis(qubit("B"), 0);
  CHECK(tensor(zero_a, zero_b).amplitudes().isApprox(vec({1.0, 0.0, 0.0, 0.0})));
  const auto one_a = PureState::basis(qubit("A"), 1);
  CHECK(tensor(one_a, zero_b).amplitudes().isApprox(vec({0.0, 0.0, 1.0, 0.0})));

  const auto mixed = tensor(DensityMatrix::maximally_mixed(qubit("A")),
                            DensityMatrix::from_pure(zero_b));
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = 0.5;
  expect(2, 2) = 0.5;
  CHECK(mixed.matrix().isApprox(expect));
  CHECK_ERROR(tensor(zero_a, zero_a), ErrorCode::kLabelClash);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_density(SpaceLayout{{"A", 3}}, 2, seed);
    const auto sigma = random_density(SpaceLayout{{"B", 4}}, 3, seed + 100);
    const auto joint = tensor(rho, sigma);
    // Index-sum oracle: diagonal entry (a, b) is rho_aa sigma_bb.
    Complex tr = 0.0;
    for (Eigen::Index a = 0; a < 3; ++a) {
      for (Eigen::Index b = 0; b < 4; ++b) {
        CHECK(std::abs(joint.matrix()(a * 4 + b, a * 4 + b) -
                       rho.matrix()(a, a) * sigma.matrix()(b, b)) < 1e-14);
        tr += joint.matrix()(a * 4 + b, a * 4 + b);
      }
    }
    CHECK(std::abs(tr - 1.0) < 1e-12);
  }
}

TEST_CASE("partial trace") {
  const auto rho_a = random_density(SpaceLayout{{"A", 3}}, 3, 1);
  const auto sigma_b = random_density(SpaceLayout{{"B", 2}}, 1, 2);
  CHECK(partial_trace(tensor(rho_a, sigma_b), {"A"}).matrix().isApprox(rho_a.matrix(), 1e-12));

  CVector bell = CVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const auto phi = DensityMatrix::from_pure(PureState(SpaceLayout{{"A", 2}, {"B", 2}}, bell));
  CHECK(partial_trace(phi, {"A"}).matrix().isApprox(0.5 * CMatrix::Identity(2, 2)));

  CHECK_ERROR(partial_trace(phi, {}), ErrorCode::kEmptyKeep);
  CHECK_ERROR(partial_trace(phi, {"Z"}), ErrorCode::kLabelUnknown);

  const SpaceLayout abc{{"A", 2}, {"B", 3}, {"C", 2}};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rho = random_density(abc, 1 + seed % 12, seed);
    const auto one_shot = partial_trace(rho, {"A"});
    const auto two_step = partial_trace(partial_trace(rho, {"A", "B"}), {"A"});
    CHECK((one_shot.matrix() - two_step.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    for (const auto& keep : std::vector<std::vector<bool>>{{true, false, false},
                                                           {false, true, true},
                                                           {true, false, true}}) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < 3; ++i) {
        if (keep[i]) labels.push_back(abc.subsystems()[i].label);
      }
      const auto lib = partial_trace(rho, labels);
      const auto ref = oracle::partial_trace(rho.matrix(), {2, 3, 2}, keep);
      CHECK((lib.matrix() - ref).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(lib.layout().labels() == labels);
    }
  }

  // Linear and trace preserving on arbitrary Hermitian operators.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  CMatrix h1(12, 12), h2(12, 12);
  for (Eigen::Index i = 0; i < 12; ++i) {
    for (Eigen::Index j = 0; j < 12; ++j) {
      h1(i, j) = Complex(n(rng), n(rng));
      h2(i, j) = Complex(n(rng), n(rng));
    }
  }
  h1 = (h1 + h1.adjoint()).eval();
  h2 = (h2 + h2.adjoint()).eval();
  const auto pt = [&](const CMatrix& m) { return partial_trace(m, abc, {"B"}); };
  CHECK((pt(0.3 * h1 - 1.7 * h2) - (0.3 * pt(h1) - 1.7 * pt(h2))).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(pt(h1).trace() - h1.trace()) < 1e-12);
}

TEST_CASE("purification") {
  const auto psi = random_pure(SpaceLayout{{"A", 3}}, 4);
  const auto pure = purify(DensityMatrix::from_pure(psi), "E");
  CHECK(pure.layout().dim_of("E") == 1);
  CHECK(std::norm(pure.amplitudes().dot(psi.amplitudes())) == doctest::Approx(1.0));

  const auto half = purify(DensityMatrix::maximally_mixed(qubit("A")), "E");
  CHECK(half.layout().dim_of("E") == 2);
  CHECK(partial_trace(DensityMatrix::from_pure(half), {"A"}).matrix().isApprox(
      0.5 * CMatrix::Identity(2, 2), 1e-12));

  const auto rank3 = random_density(SpaceLayout{{"A", 4}}, 3, 9);
  const auto p3 = purify(rank3, "E");
  CHECK(p3.layout().dim_of("E") == 3);
  CHECK((partial_trace(DensityMatrix::from_pure(p3), {"A"}).matrix() - rank3.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-10);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t da = 1 + seed % 4;
    const std::size_t db = 1 + (seed / 4) % 4;
    const SpaceLayout l{{"A", da}, {"B", db}};
    const auto rho = random_density(l, 1 + seed % (da * db), seed);
    const auto back = partial_trace(DensityMatrix::from_pure(purify(rho, "E")), {"A", "B"});
    CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("permutation") {
  const SpaceLayout ab{{"A", 2}, {"B", 2}};
  const auto s01 = PureState::basis(ab, 1);
  const auto swapped = permute(s01, {"B", "A"});
  CHECK(swapped.amplitudes().isApprox(vec({0.0, 0.0, 1.0, 0.0})));
  CHECK(swapped.layout().labels() == std::vector<std::string>{"B", "A"});
  CHECK_ERROR(permute(s01, {"A"}), ErrorCode::kBadPermutation);
  CHECK_ERROR(permute(s01, {"A", "A"}), ErrorCode::kBadPermutation);
  CHECK_ERROR(permute(s01, {"A", "C"}), ErrorCode::kBadPermutation);

  const SpaceLayout abc{{"A", 2}, {"B", 3}, {"C", 4}};
  const auto psi = random_pure(abc, 3);
  const auto round = permute(permute(psi, {"C", "A", "B"}), {"A", "B", "C"});
  CHECK((round.amplitudes() - psi.amplitudes()).norm() < 1e-14);

  const auto rho = random_density(abc, 5, 8);
  const auto perm = permute(rho, {"B", "C", "A"});
  CHECK((partial_trace(perm, {"A"}).matrix() - partial_trace(rho, {"A"}).matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  // Index bookkeeping: <c a b|perm|c' a' b'> = <a b c|rho|a' b' c'>.
  const auto p2 = permute(rho, {"C", "A", "B"});
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 4; ++c) {
      const Eigen::Index old_idx = (a * 3 + 2) * 4 + c;
      const Eigen::Index new_idx = (c * 2 + a) * 3 + 2;
      CHECK(std::abs(p2.matrix()(new_idx, new_idx) - rho.matrix()(old_idx, old_idx)) < 1e-15);
    }
  }
}

TEST_CASE("isometries") {
  const auto psi = random_pure(SpaceLayout{{"S", 3}}, 1);
  CHECK((apply_isometry(Isometry::identity(SpaceLayout{{"S", 3}}), psi).amplitudes() -
         psi.amplitudes())
            .norm() < 1e-15);

  // |k_S> -> |k_A 0_B> preserves inner products of the basis.
  CMatrix emb = CMatrix::Zero(6, 3);
  for (int k = 0; k < 3; ++k) emb(2 * k, k) = 1.0;
  const Isometry v(SpaceLayout{{"S", 3}}, SpaceLayout{{"A", 3}, {"B", 2}}, emb);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const auto vi = apply_isometry(v, PureState::basis(SpaceLayout{{"S", 3}}, i));
      const auto vj = apply_isometry(v, PureState::basis(SpaceLayout{{"S", 3}}, j));
      CHECK(std::abs(vi.inner(vj) - (i == j ? 1.0 : 0.0)) < 1e-15);
    }
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SpaceLayout in{{"S", 1 + seed % 4}};
    const SpaceLayout out{{"A", 4}, {"B", 2}};
    const auto w = random_isometry(in, out, seed);
    CHECK(linalg::isometry_defect(w.matrix()) < 1e-12);
    const auto phi = apply_isometry(w, random_pure(in, seed + 7));
    CHECK(std::abs(phi.amplitudes().norm() - 1.0) < 1e-12);
    const auto rho = apply_isometry(w, random_density(in, 1, seed));
    CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-12);
  }
  CHECK_ERROR(Isometry(SpaceLayout{{"S", 2}}, SpaceLayout{{"A", 2}}, 2.0 * CMatrix::Identity(2, 2)),
              ErrorCode::kNotIsometry);
  CHECK_ERROR(apply_isometry(v, random_pure(SpaceLayout{{"T", 3}}, 1)), ErrorCode::kLayoutMismatch);
}

TEST_CASE("random generators") {
  const SpaceLayout l{{"A", 3}};
  CHECK(random_pure(l, 11).amplitudes() == random_pure(l, 11).amplitudes());
  CHECK(random_density(l, 2, 11).matrix() == random_density(l, 2, 11).matrix());
  CHECK(random_pure(l, 11).amplitudes() != random_pure(l, 12).amplitudes());
  CHECK(std::abs(random_pure(SpaceLayout{{"A", 1}}, 3).amplitudes()[0]) == doctest::Approx(1.0));
  CHECK_ERROR(random_density(l, 4, 1), ErrorCode::kBadRank);
  CHECK_ERROR(random_density(l, 0, 1), ErrorCode::kBadRank);

  for (std::size_t rank = 1; rank <= 3; ++rank) {
    const auto eig = linalg::hermitian_eigen(random_density(l, rank, 77).matrix());
    std::size_t numerical_rank = 0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) numerical_rank += eig.values[i] > 1e-12;
    CHECK(numerical_rank == rank);
  }

  // Haar symmetry: the mean of <0|rho|0> over random qubit states is 1/2.
  double mean = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) mean += random_density(qubit("A"), 1 + i % 2, i).matrix()(0, 0).real();
  CHECK(std::abs(mean / n - 0.5) < 0.02);

  // Every constructed density matrix satisfies the invariants tightly.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SpaceLayout big{{"A", 2 + seed % 15}};
    const auto rho = random_density(big, 1 + seed % big.total_dim(), seed);
    const auto eig = linalg::hermitian_eigen(rho.matrix());
    CHECK(eig.values.minCoeff() >= -1e-10);
    CHECK(std::abs(rho.matrix().trace() - 1.0) <= 1e-10);
    CHECK((rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
