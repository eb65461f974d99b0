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
#include "qsblab/metrics.hpp"
#include "test_util.hpp"

using namespace qsblab;

namespace {

const SpaceLayout kQubit{{"A", 2}};

DensityMatrix diag(std::initializer_list<double> p) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  Eigen::Index i = 0;
  for (double x : p) {
    m(i, i) = x;
    ++i;
  }
  return DensityMatrix(SpaceLayout{{"A", p.size()}}, m);
}

}  // namespace

TEST_CASE("fidelity basics") {
  const auto rho = random_density(SpaceLayout{{"A", 4}}, 3, 1);
  CHECK(double(fidelity(rho, rho)) == doctest::Approx(1.0).epsilon(1e-10));
  const auto zero = DensityMatrix::from_pure(PureState::basis(kQubit, 0));
  const auto one = DensityMatrix::from_pure(PureState::basis(kQubit, 1));
  CHECK(double(fidelity(zero, one)) == doctest::Approx(0.0));
  CHECK(double(fidelity(diag({0.5, 0.5}), diag({0.9, 0.1}))) ==
        doctest::Approx(oracle::bhattacharyya({0.5, 0.5}, {0.9, 0.1})).epsilon(1e-12));
  CHECK(double(fidelity(diag({0.5, 0.5}), diag({0.9, 0.1}))) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_ERROR(fidelity(rho, zero), ErrorCode::kLayoutMismatch);
  CHECK_ERROR(FidelityValue(1.1), ErrorCode::kBadDim);
  CHECK(double(FidelityValue(-1e-12)) == 0.0);

  const auto psi = random_pure(kQubit, 3);
  CHECK(double(fidelity_pure(DensityMatrix::from_pure(psi), psi)) == doctest::Approx(1.0));
  CHECK(double(fidelity_pure(DensityMatrix::maximally_mixed(kQubit), psi)) == doctest::Approx(0.5));
}

TEST_CASE("fidelity agrees with the square-root formula") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const std::size_t d = 2 + i % 7;
    const SpaceLayout l{{"A", d}};
    const std::size_t rank_rho = 1 + rng() % d;
    const std::size_t rank_sigma = 1 + rng() % d;
    const auto rho = random_density(l, rank_rho, rng());
    const auto sigma = random_density(l, rank_sigma, rng());
    const double f = fidelity(rho, sigma);
    // Square roots of round-off eigenvalues make the oracle itself noisy at
    // the 1e-8 level for rank-deficient inputs.
    const double tol = rank_rho == d && rank_sigma == d ? 1e-10 : 1e-7;
    CHECK(std::abs(f - oracle::fidelity(rho.matrix(), sigma.matrix())) < tol);
    CHECK(std::abs(f - double(fidelity(sigma, rho))) < 1e-10);
    CHECK(f <= 1.0 + 1e-9);

    const auto psi = random_pure(l, rng());
    const double fp = fidelity_pure(rho, psi);
    CHECK(std::abs(fp - double(fidelity(rho, DensityMatrix::from_pure(psi)))) < 1e-10);
    CHECK(std::abs(fp - psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real()) < 1e-12);

    // Commuting case against the classical formula.
    std::vector<double> p(d), q(d);
    double sp = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      p[k] = std::uniform_real_distribution<double>(0, 1)(rng);
      q[k] = std::uniform_real_distribution<double>(0, 1)(rng);
      sp += p[k];
      sq += q[k];
    }
    CMatrix mp = CMatrix::Zero(d, d), mq = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < d; ++k) {
      p[k] /= sp;
      q[k] /= sq;
      mp(k, k) = p[k];
      mq(k, k) = q[k];
    }
    CHECK(std::abs(double(fidelity(DensityMatrix(l, mp), DensityMatrix(l, mq))) -
                   oracle::bhattacharyya(p, q)) < 1e-12);
  }
}

TEST_CASE("trace distance") {
  const auto rho = random_density(SpaceLayout{{"A", 3}}, 2, 5);
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0));
  const auto zero = DensityMatrix::from_pure(PureState::basis(kQubit, 0));
  const auto one = DensityMatrix::from_pure(PureState::basis(kQubit, 1));
  CHECK(trace_distance(zero, one) == doctest::Approx(1.0));
  CHECK(trace_distance(diag({0.5, 0.5}), diag({0.9, 0.1})) == doctest::Approx(0.4));
  for (std::uint64_t s = 0; s < 100; ++s) {
    const SpaceLayout l{{"A", 2 + s % 9}};
    const auto a = random_density(l, 1 + s % 2, s);
    const auto b = random_density(l, 2, s + 1000);
    const double d = trace_distance(a, b);
    CHECK(std::abs(d - oracle::trace_distance(a.matrix(), b.matrix())) < 1e-10);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0 + 1e-12);
    CHECK(check_fuchs_van_de_graaf(a, b).satisfied);
  }
}

TEST_CASE("triangle inequalities") {
  const auto rho = random_density(SpaceLayout{{"A", 3}}, 2, 1);
  const auto same = check_triangle(rho, rho, rho);
  CHECK(same.lhs == doctest::Approx(1.0));
  CHECK(same.rhs == doctest::Approx(1.0));
  CHECK(same.satisfied);

  // rho = sigma, omega pure and orthogonal to the pure sigma: vacuous bound.
  const auto zero = DensityMatrix::from_pure(PureState::basis(kQubit, 0));
  const auto one = DensityMatrix::from_pure(PureState::basis(kQubit, 1));
  const auto vac = check_triangle(zero, one, zero);
  CHECK(vac.rhs <= 0.0);
  CHECK(vac.lhs >= vac.rhs);
  CHECK(vac.satisfied);

  for (std::uint64_t s = 0; s < 500; ++s) {
    const SpaceLayout l{{"A", 2 + s % 7}};
    const auto a = random_density(l, 1 + s % l.total_dim(), s);
    const auto b = random_density(l, 1 + (s / 2) % l.total_dim(), s + 1);
    const auto c = random_density(l, 1, s + 2);
    const auto t = check_triangle(a, b, c);
    CHECK(t.satisfied);
    CHECK(t.slack == doctest::Approx(t.lhs - t.rhs));
    const auto tp = check_triangle_pure(a, c, random_pure(l, s + 3));
    CHECK(tp.satisfied);
  }
}

TEST_CASE("monotonicity under partial trace") {
  const SpaceLayout la{{"A", 2}}, lb{{"B", 3}};
  const auto tau = random_density(lb, 2, 3);
  const auto r = check_monotonicity(tensor(random_density(la, 2, 1), tau),
                                    tensor(random_density(la, 1, 2), tau), {"A"});
  CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-9));

  // Pure joint states with equal marginals: marginal fidelity 1.
  CVector bell = CVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  CVector bell2 = CVector::Zero(4);
  bell2[1] = bell2[2] = 1.0 / std::sqrt(2.0);
  const SpaceLayout ab{{"A", 2}, {"B", 2}};
  const auto m = check_monotonicity(DensityMatrix::from_pure(PureState(ab, bell)),
                                    DensityMatrix::from_pure(PureState(ab, bell2)), {"A"});
  CHECK(m.lhs == doctest::Approx(1.0));
  CHECK(m.rhs == doctest::Approx(0.0));

  for (std::uint64_t s = 0; s < 300; ++s) {
    const SpaceLayout l{{"A", 1 + s % 4}, {"B", 1 + (s / 4) % 4}};
    const auto a = random_density(l, 1 + s % l.total_dim(), s);
    const auto b = random_density(l, 1 + (s * 7) % l.total_dim(), s + 1);
    CHECK(check_monotonicity(a, b, {"A"}).satisfied);
    CHECK(check_monotonicity(a, b, {"B"}).satisfied);
  }
}

TEST_CASE("Uhlmann partner") {
  const auto rho = random_density(SpaceLayout{{"A", 3}}, 3, 4);
  const auto phi = purify(rho, "R");
  const auto self = uhlmann_partner(rho, rho, phi);
  CHECK(std::norm(phi.inner(self)) == doctest::Approx(1.0).epsilon(1e-10));

  // Commuting diagonal states.
  const auto p = diag({0.5, 0.3, 0.2});
  const auto q = diag({0.1, 0.6, 0.3});
  const auto chi = uhlmann_partner(p, q, purify(p, "R"));
  CHECK(std::norm(purify(p, "R").inner(chi)) ==
        doctest::Approx(oracle::bhattacharyya({0.5, 0.3, 0.2}, {0.1, 0.6, 0.3})).epsilon(1e-10));

  for (std::uint64_t s = 0; s < 100; ++s) {
    const SpaceLayout l{{"A", 2 + s % 4}};
    const auto r = random_density(l, l.total_dim(), s);
    const std::size_t rank_sigma = 1 + s % l.total_dim();
    const auto sg = random_density(l, rank_sigma, s + 50);
    const auto pur = purify(r, "R");
    const auto c = uhlmann_partner(r, sg, pur);
    CHECK((partial_trace(DensityMatrix::from_pure(c), {"A"}).matrix() - sg.matrix())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK(std::abs(std::norm(pur.inner(c)) - double(fidelity(r, sg))) < 1e-8);
    const double tol = rank_sigma == l.total_dim() ? 1e-10 : 1e-7;
    CHECK(std::abs(std::norm(pur.inner(c)) - oracle::fidelity(r.matrix(), sg.matrix())) < tol);
    CHECK(check_purification_bound(r, sg, pur).satisfied);
  }

  // A purification that reduces to something else is rejected.
  const auto other = purify(random_density(SpaceLayout{{"A", 3}}, 3, 99), "R");
  CHECK_ERROR(uhlmann_partner(rho, rho, other), ErrorCode::kBadPurification);
  // A rank-1 rho purifies onto a one-dimensional space: too small for sigma.
  const auto pure_rho = DensityMatrix::from_pure(random_pure(SpaceLayout{{"A", 3}}, 1));
  CHECK_ERROR(uhlmann_partner(pure_rho, rho, purify(pure_rho, "R")), ErrorCode::kBadPurification);
}

TEST_CASE("convexity bounds") {
  const auto psi = random_pure(SpaceLayout{{"A", 3}}, 7);
  const auto pure = max_eig_convexity(DensityMatrix::from_pure(psi), random_pure(SpaceLayout{{"A", 3}}, 8));
  CHECK(pure.lambda_max == doctest::Approx(1.0));
  CHECK(pure.top_eigenvector.rhs == doctest::Approx(pure.fidelity));

  const auto half = max_eig_convexity(DensityMatrix::maximally_mixed(kQubit), PureState::basis(kQubit, 0));
  CHECK(half.fidelity == doctest::Approx(0.5));
  CHECK(half.lambda_max == doctest::Approx(0.5));
  CHECK(half.top_eigenvalue.slack == doctest::Approx(0.0));

  // The top-eigenvector form fails below fidelity 1/2: rho = diag(0.6, 0.4)
  // and psi = |1> give F = 0.4 but |<phi_max|psi>|^2 = 0.
  const auto counter = max_eig_convexity(diag({0.6, 0.4}), PureState::basis(kQubit, 1));
  CHECK(counter.fidelity == doctest::Approx(0.4));
  CHECK_FALSE(counter.top_eigenvector.satisfied);
  CHECK_FALSE(counter.top_eigenvector_applies);
  CHECK(counter.best_eigenvector.satisfied);
  CHECK(counter.top_eigenvalue.satisfied);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const SpaceLayout l{{"A", 2 + static_cast<std::size_t>(i % 8)}};
    const auto rho = random_density(l, 1 + rng() % l.total_dim(), rng());
    const auto phi = random_pure(l, rng());
    const auto rep = max_eig_convexity(rho, phi);
    CHECK(std::abs(rep.lambda_max - oracle::top_eigenvalue(rho.matrix())) < 1e-10);
    CHECK(rep.top_eigenvalue.satisfied);
    CHECK(rep.best_eigenvector.satisfied);
    if (rep.top_eigenvector_applies) CHECK(rep.top_eigenvector.satisfied);
    CHECK(rep.tighter().satisfied);
  }
  // Inputs in the top-eigenvector regime: rho close to a pure state.
  for (int i = 0; i < 500; ++i) {
    const SpaceLayout l{{"A", 2 + static_cast<std::size_t>(i % 6)}};
    const auto v = random_pure(l, rng());
    const CMatrix mix = 0.8 * DensityMatrix::from_pure(v).matrix() +
                        0.2 * random_density(l, l.total_dim(), rng()).matrix();
    const CVector near = v.amplitudes() + 0.2 * oracle::unit_vector(v.dim(), rng);
    const auto rep = max_eig_convexity(DensityMatrix(l, mix), PureState::normalized(l, near));
    if (rep.fidelity > 0.5) {
      CHECK(rep.top_eigenvector_applies);
      CHECK(rep.top_eigenvector.satisfied);
    }
  }
}
