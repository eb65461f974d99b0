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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qsblab/optimize.hpp"
#include "qsblab/qsb.hpp"
#include "test_util.hpp"

using namespace qsblab;

namespace {

std::vector<PureState> haar(std::size_t d, std::size_t n, std::uint64_t seed) {
  std::vector<PureState> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_pure(SpaceLayout{{"S", d}}, seed + i));
  return out;
}

std::vector<PureState> basis_of(std::size_t d) {
  std::vector<PureState> out;
  for (std::size_t k = 0; k < d; ++k) out.push_back(PureState::basis(SpaceLayout{{"S", d}}, k));
  return out;
}

QsbInstance mixed_with(const QsbInstance& inst, const KrausChannel& noise, double rate) {
  return QsbInstance(mix_channels(inst.channel(), noise, rate), inst.v_abs(), inst.v_acs());
}

QsbInstance depolarized(const QsbInstance& inst, double rate) {
  const auto& c = inst.channel();
  return mixed_with(inst, replacement_channel(c.input_layout(), c.output_layout()), rate);
}

}  // namespace

TEST_CASE("perfect construction") {
  const auto inst = perfect_qsb_construct({2, 2, 2, 2});
  CHECK(inst.channel().kraus_ops().size() == 1);
  for (const auto& psi : haar(2, 100, 1)) {
    const auto f = output_fidelities(inst, psi);
    CHECK(std::abs(f.f_ab - 1.0) < 1e-12);
    CHECK(std::abs(f.f_ac - 1.0) < 1e-12);
  }
  const auto trivial = perfect_qsb_construct({2, 2, 1, 1});
  CHECK(trivial.channel().kraus_ops()[0].isApprox(CMatrix::Identity(2, 2)));
  for (const auto& psi : haar(2, 10, 5)) CHECK(std::abs(output_fidelities(trivial, psi).worst - 1.0) < 1e-15);
  CHECK_ERROR(perfect_qsb_construct({3, 2, 4, 4}), ErrorCode::kNoPerfectQsb);
  CHECK_ERROR(perfect_qsb_construct({0, 2, 1, 1}), ErrorCode::kBadDim);

  // Basis states land on |k_A 0_B 0_C>.
  const auto big = perfect_qsb_construct({3, 4, 2, 3});
  for (std::size_t k = 0; k < 3; ++k) {
    const CVector out =
        big.channel().kraus_ops()[0] * PureState::basis(SpaceLayout{{"S", 3}}, k).amplitudes();
    CHECK(std::abs(out[static_cast<Eigen::Index>(k * 6)] - 1.0) < 1e-15);
  }
}

TEST_CASE("instance validation") {
  const auto good = perfect_qsb_construct({2, 2, 2, 3});
  const auto& c = good.channel();
  CHECK_ERROR(QsbInstance(c, good.v_acs(), good.v_acs()), ErrorCode::kLayoutMismatch);
  const KrausChannel wrong_out(SpaceLayout{{"S", 2}}, SpaceLayout{{"A", 2}, {"C", 3}, {"B", 2}},
                               c.kraus_ops());
  CHECK_ERROR(QsbInstance(wrong_out, good.v_abs(), good.v_acs()), ErrorCode::kLayoutMismatch);
  CHECK_ERROR(output_fidelities(good, random_pure(SpaceLayout{{"T", 2}}, 1)),
              ErrorCode::kLayoutMismatch);
}

TEST_CASE("epsilon estimation") {
  const auto perfect = perfect_qsb_construct({3, 3, 2, 2});
  const auto samples = standard_sample_states(3);
  CHECK(samples.size() == 3 + 3 * 8 + 200);
  CHECK(measure_eps(perfect, samples).eps_hat <= 1e-10);
  CHECK_ERROR(measure_eps(perfect, std::vector<PureState>{}), ErrorCode::kEmptyInput);

  const auto est = measure_eps(depolarized(perfect, 0.01), samples);
  CHECK(est.eps_hat > 0.0);
  CHECK(est.eps_hat <= 0.02);
  // The replacement output has F = 1/(d_A d_B) against any pure state on
  // AB, so the deficit is input independent: 0.01 (1 - 1/6).
  CHECK(est.eps_hat == doctest::Approx(0.01 * (1.0 - 1.0 / 6.0)).epsilon(1e-9));
  for (const auto& f : est.per_state) CHECK(f.worst == std::min(f.f_ab, f.f_ac));

  // With d_A = 1 the marginals are those of the cloner.
  const auto clone = cloner_instance();
  CHECK(measure_eps(clone, basis_of(2)).eps_hat >= 1.0 - kCloningCeiling - 1e-12);
}

TEST_CASE("product extraction") {
  const auto perfect = perfect_qsb_construct({3, 3, 2, 2});
  for (const auto& psi : haar(3, 20, 7)) {
    for (auto o : {Orientation::kB, Orientation::kC}) {
      const auto p = lemma1_extract(perfect, psi, o);
      CHECK(p.orientation == o);
      CHECK(std::abs(p.f_abc - 1.0) < 1e-9);
      CHECK(std::abs(p.f_ab - 1.0) < 1e-9);
      CHECK(std::abs(p.f_ac - 1.0) < 1e-9);
      CHECK(std::abs(p.phi_a.amplitudes().norm() - 1.0) < 1e-12);
      CHECK(std::abs(p.phi_e.amplitudes().norm() - 1.0) < 1e-12);
    }
  }

  const auto f = lemma1_floors(1e-8, Orientation::kB);
  CHECK(f.abc == doctest::Approx(1.0 - 3.0 * std::pow(1e-8, 0.125)));
  CHECK(f.ab == doctest::Approx(1.0 - 2e-4));
  CHECK(f.ac == doctest::Approx(1.0 - 3.4 * std::pow(1e-8, 0.125)));
  const auto fc = lemma1_floors(1e-8, Orientation::kC);
  CHECK(fc.ab == f.ac);
  CHECK(fc.ac == f.ab);
  CHECK(lemma1_floors(1.0).abc == 0.0);

  // Floors on perturbed perfect instances, per state and per orientation.
  std::mt19937_64 rng(31);
  std::size_t checked = 0;
  for (const QsbDims d : {QsbDims{2, 2, 2, 2}, QsbDims{3, 3, 2, 2}, QsbDims{2, 3, 1, 2}}) {
    const auto perfect_d = perfect_qsb_construct(d);
    for (double rate : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 5e-2}) {
      const KrausChannel noise =
          to_instance(d, random_parameters(d, 2, rng())).channel();
      for (const auto& inst : {depolarized(perfect_d, rate), mixed_with(perfect_d, noise, rate)}) {
        for (const auto& psi : haar(d.s, 10, rng())) {
          const double eps = 1.0 - output_fidelities(inst, psi).worst;
          for (auto o : {Orientation::kB, Orientation::kC}) {
            const auto p = lemma1_extract(inst, psi, o);
            const auto fl = lemma1_floors(eps, o);
            CHECK(p.f_abc >= fl.abc - 1e-9);
            CHECK(p.f_ab >= fl.ab - 1e-9);
            CHECK(p.f_ac >= fl.ac - 1e-9);
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked == 3 * 6 * 2 * 10 * 2);
}

TEST_CASE("overlap bound for m > d vectors") {
  CHECK(lemma2_bound(3, 2) == doctest::Approx(0.5));
  CHECK(lemma2_bound(2, 1) == doctest::Approx(1.0));
  CHECK_ERROR(lemma2_bound(2, 2), ErrorCode::kBoundVacuous);
  CHECK_ERROR(lemma2_bound(1, 3), ErrorCode::kBoundVacuous);

  const auto four = haar(3, 4, 100);
  const auto w = lemma2_witness(four);
  REQUIRE(w.check.has_value());
  CHECK(w.overlap >= 1.0 / 3.0);
  CHECK(w.check->satisfied);
  CHECK_ERROR(lemma2_witness(std::vector<PureState>{four[0]}), ErrorCode::kEmptyInput);
  CHECK_FALSE(lemma2_witness(std::vector<PureState>{four[0], four[1]}).check.has_value());

  // Exhaustive-scan oracle and lowest-index tie breaking.
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng() % 6;
    const std::size_t m = d + 1 + rng() % 6;
    std::vector<PureState> vs;
    for (std::size_t i = 0; i < m; ++i) {
      vs.emplace_back(SpaceLayout{{"S", d}}, oracle::unit_vector(static_cast<Eigen::Index>(d), rng));
    }
    double best = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        best = std::max(best, std::abs(vs[i].amplitudes().dot(vs[j].amplitudes())));
      }
    }
    const auto wt = lemma2_witness(vs);
    CHECK(wt.overlap == doctest::Approx(best).epsilon(1e-14));
    CHECK(wt.overlap >= lemma2_bound(m, d) - 1e-12);
  }
  const PureState e0 = PureState::basis(SpaceLayout{{"S", 1}}, 0);
  const auto tie = lemma2_witness(std::vector<PureState>{e0, e0, e0});
  CHECK(tie.i == 0);
  CHECK(tie.j == 1);
}

TEST_CASE("Gram-Schmidt residual") {
  const SpaceLayout q{{"A", 2}};
  const auto e0 = PureState::basis(q, 0);
  const auto e1 = PureState::basis(q, 1);
  CHECK((gram_schmidt_residual(e0, e1, 0.0).amplitudes() - e1.amplitudes()).norm() < 1e-15);
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK((gram_schmidt_residual(e0, PureState(q, plus), 0.0).amplitudes() - e1.amplitudes()).norm() <
        1e-15);
  CHECK_ERROR(gram_schmidt_residual(e0, e0, 0.3), ErrorCode::kDegenerateResidual);

  for (std::uint64_t s = 0; s < 200; ++s) {
    const SpaceLayout l{{"A", 2 + s % 5}};
    const auto a = random_pure(l, s);
    const auto b = random_pure(l, s + 1000);
    const double theta = 0.1 * static_cast<double>(s);
    const auto r = gram_schmidt_residual(a, b, theta);
    CHECK(std::abs(a.inner(r)) < 1e-12);
    CHECK(std::abs(r.amplitudes().norm() - 1.0) < 1e-12);
    CHECK(std::norm(b.inner(r)) == doctest::Approx(1.0 - std::norm(a.inner(b))).epsilon(1e-10));
  }
}

TEST_CASE("rank-two top eigenvalue") {
  CHECK(lambda_max_rank2(1.0, 0.0, 0.3) == doctest::Approx(1.0));
  CHECK(lambda_max_rank2(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0) == doctest::Approx(0.5));
  CHECK_ERROR(lambda_max_rank2(1.0, 1.0, 0.5), ErrorCode::kBadAmplitudes);
  CHECK_ERROR(lambda_max_rank2(1.0, 0.0, 1.5), ErrorCode::kBadAmplitudes);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const auto d = static_cast<Eigen::Index>(2 + t % 5);
    const CVector p1 = oracle::unit_vector(d, rng);
    const CVector p2 = oracle::unit_vector(d, rng);
    const double a2 = u(rng);
    const Complex alpha = std::polar(std::sqrt(a2), 6.0 * u(rng));
    const Complex beta = std::polar(std::sqrt(1.0 - a2), 6.0 * u(rng));
    const CMatrix mix = a2 * p1 * p1.adjoint() + (1.0 - a2) * p2 * p2.adjoint();
    const double f12 = std::norm(p1.dot(p2));
    CHECK(std::abs(lambda_max_rank2(alpha, beta, f12) - oracle::top_eigenvalue(mix)) < 1e-10);
  }
}

TEST_CASE("threshold") {
  const auto t1 = epsilon_threshold(1);
  CHECK(t1.value == 0.6e-175);
  CHECK(t1.second == 2.4e-14);
  const auto t2 = epsilon_threshold(2);
  CHECK(t2.value == 0.6e-175);
  CHECK(t2.second == 9.375e-17);
  CHECK_FALSE(t2.second_wins);
  CHECK(epsilon_threshold(10).second == 2.4e-22);
  const auto big = epsilon_threshold(1e21);
  CHECK(big.second_wins);
  CHECK(big.value == 2.4e-182);
  CHECK_ERROR(epsilon_threshold(2.5), ErrorCode::kBadDim);
  CHECK_ERROR(epsilon_threshold(0), ErrorCode::kBadDim);

  for (double d = 1; d <= 1e6; d *= 3) CHECK(epsilon_threshold(std::floor(d)).value == 0.6e-175);
  // Non-increasing in d_A.
  double prev = epsilon_threshold(1).value;
  for (double d = 2; d < 1e30; d = std::floor(d * 1.7)) {
    const double v = epsilon_threshold(d).value;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("chain constants") {
  const auto r = chain_constants(1e-16, 2);
  CHECK(r.eps_prime_b == 2e-8);
  CHECK(r.eps_dprime_b == 2.0 * std::sqrt(2e-8) + 2e-8);
  CHECK(r.eps_dprime_b == doctest::Approx(2.83e-4).epsilon(1e-3));
  CHECK(r.admissible_b);
  CHECK(r.eps_zero == 0.6e-175);
  CHECK(r.eps_tprime_b ==
        3.0 * std::sqrt(r.eps_prime_b) + std::sqrt(r.eps_dprime_b) + r.eps_dprime_b);
  CHECK(r.overlap_floor == 1.0 - 4.0 * (std::sqrt(r.eps_prime_b) + std::sqrt(r.eps_tprime_b)));
  CHECK(r.eps_iv_b == 3.8 * std::pow(1e-16, 1.0 / 64.0));
  CHECK(r.eps_iv_c == 3.9 * std::pow(1e-16, 1.0 / 128.0));

  const auto one = chain_constants(1.0, 3);
  for (const auto& f : one.floors) CHECK(f.vacuous);
  CHECK_FALSE(one.cloning_contradiction);

  CHECK_ERROR(chain_constants(0.0, 2), ErrorCode::kBadEpsilon);
  CHECK_ERROR(chain_constants(1.5, 2), ErrorCode::kBadEpsilon);
  CHECK_ERROR(chain_constants(0.1, 0), ErrorCode::kBadDim);

  // The closed-form copy deficits dominate the two-step triangle estimate,
  // and the contradiction flag switches on for small enough eps.
  for (double e = 1.0; e > 1e-300; e *= 1e-3) {
    const auto c = chain_constants(e, 2);
    CHECK(c.eps_iv_b >= c.eps_iv_b_chain);
    CHECK(c.eps_iv_c >= c.eps_iv_c_chain);
  }
  CHECK(chain_constants(1e-250, 2).cloning_contradiction);
}

TEST_CASE("chain verification") {
  // d_S <= d_A has no overlap guarantee.
  const auto perfect = perfect_qsb_construct({2, 2, 2, 2});
  CHECK_ERROR(chain_verify(perfect, basis_of(2), 0.0), ErrorCode::kChainNotApplicable);

  ChainOptions relaxed;
  relaxed.enforce_applicability = false;
  const auto r = chain_verify(depolarized(perfect, 1e-6), basis_of(2), 0.0, relaxed);
  CHECK(r.all_satisfied());
  std::size_t counted = 0;
  for (const auto& c : r.checks) counted += c.counts();
  CHECK(counted > 0);

  // A non-orthonormal basis is rejected.
  auto bad = basis_of(2);
  bad[1] = bad[0];
  CHECK_ERROR(chain_verify(perfect, bad, 0.0, relaxed), ErrorCode::kBadDim);

  // Optimizer-produced and random instances with d_S > d_A: every counted
  // check holds at the measured eps.
  OptimizeConfig cfg;
  cfg.dims = {3, 2, 2, 2};
  cfg.restarts = 1;
  cfg.max_iters = 150;
  cfg.samples.haar_count = 40;
  const auto point = optimize_qsb(cfg);
  const auto opt = chain_verify(point.best_instance, basis_of(3), 1.0 - point.best_worst_fidelity);
  CHECK(opt.all_satisfied());
  CHECK(opt.eps >= 1.0 - point.best_worst_fidelity);

  for (std::uint64_t s = 0; s < 6; ++s) {
    const QsbDims d{3, 2, 2, 2};
    const auto inst = to_instance(d, random_parameters(d, 1 + s % 3, s));
    const auto rep = chain_verify(inst, basis_of(3), 0.0);
    CHECK(rep.all_satisfied());
    CHECK(rep.pair_first < rep.pair_second);
  }
}

TEST_CASE("cloner baseline") {
  const SpaceLayout q{{"S", 2}};
  const auto [b0, c0] = cloner_baseline(PureState::basis(q, 0));
  CHECK(double(fidelity_pure(b0, PureState(SpaceLayout{{"B", 2}}, PureState::basis(q, 0).amplitudes()))) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(validate_cpt(cloner_channel()).satisfied);
  CHECK_ERROR(cloner_baseline(random_pure(SpaceLayout{{"S", 3}}, 1)), ErrorCode::kBadDim);

  double lo = 1.0, hi = 0.0;
  for (const auto& psi : haar(2, 100, 17)) {
    const auto [rb, rc] = cloner_baseline(psi);
    const double fb = fidelity_pure(rb, PureState(SpaceLayout{{"B", 2}}, psi.amplitudes()));
    const double fc = fidelity_pure(rc, PureState(SpaceLayout{{"C", 2}}, psi.amplitudes()));
    lo = std::min({lo, fb, fc});
    hi = std::max({hi, fb, fc});
    CHECK(std::abs(fb - 5.0 / 6.0) < 1e-9);
    // Symmetric construction: the two marginals coincide.
    CHECK((rb.matrix() - rc.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(hi - lo <= 1e-9);

  const auto inst = cloner_instance();
  CHECK(inst.dims() == QsbDims{2, 1, 2, 2});
  for (const auto& psi : haar(2, 20, 3)) {
    CHECK(std::abs(output_fidelities(inst, psi).worst - 5.0 / 6.0) < 1e-9);
  }
}
