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

// Shared broadcasting: a source S copied into the overlapping outputs AB and
// AC. This header holds the instance type, the exact construction for
// d_S <= d_A, worst-case fidelity estimation, the product-state extraction,
// the Gram-matrix bound for too many vectors in a small space, and the
// inequality chain that rules out near-perfect shared broadcasting when
// d_S > d_A.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsblab/channels.hpp"
#include "qsblab/hilbert.hpp"
#include "qsblab/metrics.hpp"

namespace qsblab {

struct QsbDims {
  std::size_t s = 1;
  std::size_t a = 1;
  std::size_t b = 1;
  std::size_t c = 1;

  bool operator==(const QsbDims&) const = default;

  SpaceLayout source() const { return SpaceLayout{{"S", s}}; }
  SpaceLayout outputs() const { return SpaceLayout{{"A", a}, {"B", b}, {"C", c}}; }
  SpaceLayout ab() const { return SpaceLayout{{"A", a}, {"B", b}}; }
  SpaceLayout ac() const { return SpaceLayout{{"A", a}, {"C", c}}; }
};

/// A channel S -> ABC together with the two representation isometries
/// S -> AB and S -> AC. Layouts are fixed to [S], [A,B,C], [A,B], [A,C].
class QsbInstance {
 public:
  /// Throws LayoutMismatch if the layouts are not the canonical ones and
  /// BadDim if d_S exceeds d_A*d_B or d_A*d_C.
  QsbInstance(KrausChannel channel, Isometry v_abs, Isometry v_acs);

  const KrausChannel& channel() const { return channel_; }
  const Isometry& v_abs() const { return v_abs_; }
  const Isometry& v_acs() const { return v_acs_; }
  const QsbDims& dims() const { return dims_; }

 private:
  KrausChannel channel_;
  Isometry v_abs_;
  Isometry v_acs_;
  QsbDims dims_;
};

struct FidelityPair {
  double f_ab = 0.0;
  double f_ac = 0.0;
  double worst = 0.0;

  static FidelityPair of(double ab, double ac) { return {ab, ac, std::min(ab, ac)}; }
};

/// The isometric map |k_S> -> |k_A 0_B 0_C> with V_ABS|k> = |k_A 0_B>,
/// V_ACS|k> = |k_A 0_C>. Throws NoPerfectQsb when d_S > d_A.
QsbInstance perfect_qsb_construct(const QsbDims& dims);

/// F(rho_AB; V_ABS psi) and F(rho_AC; V_ACS psi) for rho_ABC = N(psi).
FidelityPair output_fidelities(const QsbInstance& instance, const PureState& psi);

struct EpsEstimate {
  /// 1 - min over states of the worse fidelity. This is a lower estimate
  /// of the true worst-case epsilon, which is a supremum over all inputs.
  double eps_hat = 0.0;
  std::vector<FidelityPair> per_state;
};

/// Throws EmptyInput on an empty list.
EpsEstimate measure_eps(const QsbInstance& instance, std::span<const PureState> states);

/// Basis vectors, balanced superpositions (|i> + e^{2 pi i p/8}|j>)/sqrt 2
/// for every pair i < j and p = 0..7, then `haar_count` Haar states.
std::vector<PureState> standard_sample_states(std::size_t d_s, std::size_t haar_count = 200,
                                              std::uint64_t seed = 42);

// --- Product-state extraction ---------------------------------------------

/// Which output takes the purification route in the extraction. With kB
/// (the default) phi_B comes from the purification partner and phi_C from
/// Tr_A |psi_AC><psi_AC|, giving the tighter floor on AB; kC swaps them.
enum class Orientation { kB, kC };

struct ProductApprox {
  Orientation orientation = Orientation::kB;
  PureState phi_a;
  PureState phi_b;
  PureState phi_c;
  PureState phi_e;
  double f_abc = 0.0;  // F(rho_ABC; phi_A phi_B phi_C)
  double f_ab = 0.0;   // F(psi_AB; phi_A phi_B)
  double f_ac = 0.0;   // F(psi_AC; phi_A phi_C)
};

ProductApprox lemma1_extract(const QsbInstance& instance, const PureState& psi_s,
                             Orientation orientation = Orientation::kB);

/// Fidelity floors guaranteed by the extraction at deficit eps, clamped to
/// [0, 1]: product 1 - 3 eps^(1/8); the purification-route pair
/// 1 - 2 eps^(1/2); the other pair 1 - 3.4 eps^(1/8).
struct Lemma1Floors {
  double abc = 0.0;
  double ab = 0.0;
  double ac = 0.0;
};
Lemma1Floors lemma1_floors(double eps, Orientation orientation = Orientation::kB);

// --- Overlap bound for m > d vectors ----------------------------------------

/// sqrt((m - d) / (d (m - 1))). Throws BoundVacuous when m <= d.
double lemma2_bound(std::size_t m, std::size_t d);

struct Lemma2Witness {
  std::size_t i = 0;
  std::size_t j = 0;
  double overlap = 0.0;             // |<phi_i|phi_j>|
  std::optional<BoundCheck> check;  // present when m > d
};

/// Exhaustive scan for the pair with the largest overlap (lowest indices win
/// ties). Throws EmptyInput for fewer than two vectors.
Lemma2Witness lemma2_witness(std::span<const PureState> vectors);

// --- Part two building blocks ------------------------------------------------

/// e^{i theta} (phi2 - <phi1|phi2> phi1) / sqrt(1 - |<phi1|phi2>|^2).
/// Throws DegenerateResidual when the inputs are parallel within kNumTol.
PureState gram_schmidt_residual(const PureState& phi1, const PureState& phi2, double theta);

/// Largest eigenvalue of |a|^2 |phi1><phi1| + |b|^2 |phi2><phi2| with
/// |<phi1|phi2>|^2 = f12. Throws BadAmplitudes unless |a|^2 + |b|^2 = 1 and
/// f12 is in [0, 1].
double lambda_max_rank2(Complex alpha, Complex beta, double f12);

// --- Chain constants -----------------------------------------------------------

/// The two candidates of the threshold and their minimum. d_A is a double so
/// that dimensions beyond 64-bit range (e.g. 1e21) can be evaluated; it must
/// be a positive integer value.
struct ThresholdCandidates {
  double first = 0.0;   // 0.6e-175
  double second = 0.0;  // 2.4e-14 * d_A^-8
  double value = 0.0;
  bool second_wins = false;
};
ThresholdCandidates epsilon_threshold(double d_a);

struct ChainCheck {
  std::string stage;
  BoundCheck check;
  bool vacuous = false;     // the floor is <= 0 (or an upper bound >= 1)
  bool applicable = true;   // premises of this step hold
  bool counts() const { return applicable && !vacuous; }
};

struct EpsilonChainReport {
  double eps = 0.0;
  std::size_t d_a = 1;

  double eps_prime_b = 0.0;   // 2 eps^(1/2)
  double eps_prime_c = 0.0;   // 3.4 eps^(1/8)
  double eps_dprime_b = 0.0;  // 2 sqrt(eps') + eps'
  double eps_dprime_c = 0.0;
  double eps_tprime_b = 0.0;  // 3 sqrt(eps') + sqrt(eps'') + eps''
  double eps_tprime_c = 0.0;
  double overlap_floor = 0.0;  // 1 - 4 (sqrt(eps'_B) + sqrt(eps'''_B))
  double eps_iv_b = 0.0;       // 3.8 eps^(1/64)
  double eps_iv_c = 0.0;       // 3.9 eps^(1/128)
  // sqrt(eps) + sqrt(sqrt(eps'''_X) + sqrt(4 (sqrt(eps'_B) + sqrt(eps'''_B)))),
  // the two-step triangle estimate that the closed forms above bound.
  double eps_iv_b_chain = 0.0;
  double eps_iv_c_chain = 0.0;
  double eps_zero = 0.0;
  ThresholdCandidates threshold;

  bool admissible_b = false;  // eps''_B <= 1/d_A^2
  bool admissible_c = false;
  bool cloning_contradiction = false;  // both copy floors exceed 5/6

  // Floors as (name, value) with vacuous ones flagged.
  struct Floor {
    std::string name;
    double value = 0.0;
    bool vacuous = false;
  };
  std::vector<Floor> floors;

  // Filled by chain_verify.
  double eps_input = 0.0;
  std::size_t pair_first = 0;
  std::size_t pair_second = 0;
  double theta_b = 0.0;
  double theta_c = 0.0;
  double theta_prime_b = 0.0;
  double theta_prime_c = 0.0;
  bool residual_degenerate = false;
  double copy_fidelity_b = 0.0;  // min over sampled superpositions of F(rho_B; W_BS psi)
  double copy_fidelity_c = 0.0;
  std::vector<ChainCheck> checks;

  /// True when every counted check is satisfied.
  bool all_satisfied() const;
};

/// Constants of the chain at deficit eps. Throws BadEpsilon unless
/// eps is in (0, 1], BadDim if d_A == 0.
EpsilonChainReport chain_constants(double eps, std::size_t d_a);

struct ChainOptions {
  /// Refuse to run when d_S <= d_A (no overlap guarantee for the pair).
  bool enforce_applicability = true;
  std::size_t phases = 8;
  std::size_t haar_superpositions = 24;
  std::uint64_t seed = 42;
};

/// Runs the chain numerically on `instance`: per-basis product extraction,
/// overlap table, pair selection, residual construction with phase
/// optimization, and the fidelity floors on superpositions of the selected
/// pair. The epsilon used is max(eps_hat, deficit measured on the basis and
/// on the sampled superpositions).
EpsilonChainReport chain_verify(const QsbInstance& instance, std::span<const PureState> basis,
                                double eps_hat, const ChainOptions& options = {});

// --- Cloning baseline ------------------------------------------------------------

/// Symmetric universal 1 -> 2 qubit cloner rho -> (2/3) P_sym (rho (x) 1) P_sym
/// from S (dim 2) to [B, C].
KrausChannel cloner_channel();
/// Marginals (rho_B, rho_C) of the cloner output. Throws BadDim unless psi
/// is a single qubit.
std::pair<DensityMatrix, DensityMatrix> cloner_baseline(const PureState& psi);
/// Shared-broadcasting instance with d_A = 1 whose channel is the cloner.
QsbInstance cloner_instance();

inline constexpr double kCloningCeiling = 5.0 / 6.0;

}  // namespace qsblab
