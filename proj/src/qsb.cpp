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

#include "qsblab/qsb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace qsblab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

double expectation(const CMatrix& rho, const CVector& v) { return v.dot(rho * v).real(); }

/// Grid search over [0, 2 pi) followed by golden-section refinement.
double maximize_phase(const std::function<double(double)>& objective) {
  constexpr int kGrid = 256;
  double best_theta = 0.0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kGrid; ++k) {
    const double theta = kTwoPi * k / kGrid;
    const double value = objective(theta);
    if (value > best_value) {
      best_value = value;
      best_theta = theta;
    }
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_theta - kTwoPi / kGrid;
  double hi = best_theta + kTwoPi / kGrid;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  const double refined = 0.5 * (lo + hi);
  if (objective(refined) < best_value) return best_theta;
  return std::fmod(refined + kTwoPi, kTwoPi);
}

/// (<pair| (x) 1)|phi> normalized, where `phi` is laid out as
/// (pair index) x (rest index). Falls back to the first basis vector when
/// the projection vanishes.
CVector project_out(const CVector& phi, const CVector& pair, Eigen::Index rest_dim) {
  const Eigen::Index pair_dim = pair.size();
  CVector w = CVector::Zero(rest_dim);
  for (Eigen::Index p = 0; p < pair_dim; ++p) {
    w += std::conj(pair[p]) * phi.segment(p * rest_dim, rest_dim);
  }
  const double norm = w.norm();
  if (norm < 1e-12) {
    w.setZero();
    w[0] = 1.0;
    return w;
  }
  return w / norm;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

// ---------------------------------------------------------------------------
// Instance

QsbInstance::QsbInstance(KrausChannel channel, Isometry v_abs, Isometry v_acs)
    : channel_(std::move(channel)), v_abs_(std::move(v_abs)), v_acs_(std::move(v_acs)) {
  const auto& in = channel_.input_layout();
  const auto& out = channel_.output_layout();
  if (in.size() != 1 || in.subsystems()[0].label != "S") {
    throw Error(ErrorCode::kLayoutMismatch, "channel input must be [S], got " + in.to_string());
  }
  if (out.labels() != std::vector<std::string>{"A", "B", "C"}) {
    throw Error(ErrorCode::kLayoutMismatch, "channel output must be [A,B,C], got " + out.to_string());
  }
  dims_ = QsbDims{in.total_dim(), out.dim_of("A"), out.dim_of("B"), out.dim_of("C")};
  if (dims_.s > dims_.a * dims_.b || dims_.s > dims_.a * dims_.c) {
    throw Error(ErrorCode::kBadDim, "d_S exceeds d_A*d_B or d_A*d_C");
  }
  if (!(v_abs_.input_layout() == in) || !(v_abs_.output_layout() == dims_.ab())) {
    throw Error(ErrorCode::kLayoutMismatch, "V_ABS must map [S] to " + dims_.ab().to_string());
  }
  if (!(v_acs_.input_layout() == in) || !(v_acs_.output_layout() == dims_.ac())) {
    throw Error(ErrorCode::kLayoutMismatch, "V_ACS must map [S] to " + dims_.ac().to_string());
  }
}

QsbInstance perfect_qsb_construct(const QsbDims& dims) {
  if (dims.s == 0 || dims.a == 0 || dims.b == 0 || dims.c == 0) {
    throw Error(ErrorCode::kBadDim, "dimensions must be positive");
  }
  if (dims.s > dims.a) {
    throw Error(ErrorCode::kNoPerfectQsb,
                "perfect shared broadcasting requires d_S <= d_A (got d_S = " +
                    std::to_string(dims.s) + ", d_A = " + std::to_string(dims.a) + ")");
  }
  const auto s = static_cast<Eigen::Index>(dims.s);
  const auto b = static_cast<Eigen::Index>(dims.b);
  const auto c = static_cast<Eigen::Index>(dims.c);
  CMatrix k = CMatrix::Zero(static_cast<Eigen::Index>(dims.outputs().total_dim()), s);
  CMatrix vab = CMatrix::Zero(static_cast<Eigen::Index>(dims.a * dims.b), s);
  CMatrix vac = CMatrix::Zero(static_cast<Eigen::Index>(dims.a * dims.c), s);
  for (Eigen::Index i = 0; i < s; ++i) {
    k(i * b * c, i) = 1.0;  // |i_A 0_B 0_C>
    vab(i * b, i) = 1.0;    // |i_A 0_B>
    vac(i * c, i) = 1.0;    // |i_A 0_C>
  }
  return QsbInstance(KrausChannel(dims.source(), dims.outputs(), {k}),
                     Isometry(dims.source(), dims.ab(), vab), Isometry(dims.source(), dims.ac(), vac));
}

FidelityPair output_fidelities(const QsbInstance& instance, const PureState& psi) {
  if (!(psi.layout() == instance.channel().input_layout())) {
    throw Error(ErrorCode::kLayoutMismatch, "input state must live in S");
  }
  const QsbDims& d = instance.dims();
  const CMatrix rho = instance.channel().apply_matrix(projector(psi.amplitudes()));
  const std::size_t dims[] = {d.a, d.b, d.c};
  const CMatrix rho_ab = linalg::partial_trace(rho, dims, {true, true, false});
  const CMatrix rho_ac = linalg::partial_trace(rho, dims, {true, false, true});
  const CVector psi_ab = instance.v_abs().matrix() * psi.amplitudes();
  const CVector psi_ac = instance.v_acs().matrix() * psi.amplitudes();
  return FidelityPair::of(expectation(rho_ab, psi_ab), expectation(rho_ac, psi_ac));
}

EpsEstimate measure_eps(const QsbInstance& instance, std::span<const PureState> states) {
  if (states.empty()) throw Error(ErrorCode::kEmptyInput, "measure_eps needs at least one state");
  EpsEstimate est;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& psi : states) {
    est.per_state.push_back(output_fidelities(instance, psi));
    worst = std::min(worst, est.per_state.back().worst);
  }
  est.eps_hat = 1.0 - worst;
  return est;
}

std::vector<PureState> standard_sample_states(std::size_t d_s, std::size_t haar_count,
                                              std::uint64_t seed) {
  const SpaceLayout s{{"S", d_s}};
  std::vector<PureState> out;
  for (std::size_t i = 0; i < d_s; ++i) out.push_back(PureState::basis(s, i));
  const auto n = static_cast<Eigen::Index>(d_s);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      for (int p = 0; p < 8; ++p) {
        CVector v = CVector::Zero(n);
        v[i] = 1.0 / std::sqrt(2.0);
        v[j] = std::polar(1.0 / std::sqrt(2.0), kTwoPi * p / 8.0);
        out.emplace_back(s, std::move(v));
      }
    }
  }
  std::mt19937_64 seeder(seed);
  for (std::size_t h = 0; h < haar_count; ++h) out.push_back(random_pure(s, seeder()));
  return out;
}

// ---------------------------------------------------------------------------
// Product extraction

ProductApprox lemma1_extract(const QsbInstance& instance, const PureState& psi_s,
                             Orientation orientation) {
  const QsbDims& d = instance.dims();
  const DensityMatrix rho_abc(
      d.outputs(), instance.channel().apply_matrix(projector(psi_s.amplitudes())));
  const PureState phi_abce = purify(rho_abc, "E");
  const std::size_t d_e = phi_abce.layout().dim_of("E");

  const CVector psi_ab = instance.v_abs().matrix() * psi_s.amplitudes();
  const CVector psi_ac = instance.v_acs().matrix() * psi_s.amplitudes();

  // "route" is the output whose vector comes from the purification partner;
  // "direct" is the one read off the representation directly.
  const bool b_route = orientation == Orientation::kB;
  const std::string route = b_route ? "B" : "C";
  const std::string direct = b_route ? "C" : "B";
  const std::size_t d_route = b_route ? d.b : d.c;
  const std::size_t d_direct = b_route ? d.c : d.b;
  const CVector& psi_a_direct = b_route ? psi_ac : psi_ab;   // A (x) direct

  // Partner |psi'_{route,E}> from projecting the purification on A-direct.
  const PureState phi_adre = permute(phi_abce, {"A", direct, route, "E"});
  const CVector partner =
      project_out(phi_adre.amplitudes(), psi_a_direct, static_cast<Eigen::Index>(d_route * d_e));

  const std::size_t route_e[] = {d_route, d_e};
  const CMatrix partner_proj = projector(partner);
  const CMatrix sigma_route = linalg::partial_trace(partner_proj, route_e, {true, false});
  const CMatrix sigma_e = linalg::partial_trace(partner_proj, route_e, {false, true});

  const std::size_t a_direct[] = {d.a, d_direct};
  const CMatrix direct_proj = projector(psi_a_direct);
  const CMatrix sigma_a = linalg::partial_trace(direct_proj, a_direct, {true, false});
  const CMatrix sigma_direct = linalg::partial_trace(direct_proj, a_direct, {false, true});

  const CVector phi_a = linalg::top_eigenpair(sigma_a).second;
  const CVector phi_route = linalg::top_eigenpair(sigma_route).second;
  const CVector phi_direct = linalg::top_eigenpair(sigma_direct).second;
  const CVector phi_e = linalg::top_eigenpair(sigma_e).second;

  const CVector& phi_b = b_route ? phi_route : phi_direct;
  const CVector& phi_c = b_route ? phi_direct : phi_route;

  const CVector prod_abc = linalg::kron(linalg::kron(phi_a, phi_b), phi_c);
  const double f_abc = expectation(rho_abc.matrix(), prod_abc);
  const double f_ab = std::norm(psi_ab.dot(linalg::kron(phi_a, phi_b)));
  const double f_ac = std::norm(psi_ac.dot(linalg::kron(phi_a, phi_c)));

  return ProductApprox{
      orientation,
      PureState::normalized(SpaceLayout{{"A", d.a}}, phi_a),
      PureState::normalized(SpaceLayout{{"B", d.b}}, phi_b),
      PureState::normalized(SpaceLayout{{"C", d.c}}, phi_c),
      PureState::normalized(SpaceLayout{{"E", d_e}}, phi_e),
      f_abc,
      f_ab,
      f_ac,
  };
}

Lemma1Floors lemma1_floors(double eps, Orientation orientation) {
  const double route = clamp01(1.0 - 2.0 * std::sqrt(eps));
  const double direct = clamp01(1.0 - 3.4 * std::pow(eps, 1.0 / 8.0));
  Lemma1Floors f;
  f.abc = clamp01(1.0 - 3.0 * std::pow(eps, 1.0 / 8.0));
  f.ab = orientation == Orientation::kB ? route : direct;
  f.ac = orientation == Orientation::kB ? direct : route;
  return f;
}

// ---------------------------------------------------------------------------
// Overlap bound

double lemma2_bound(std::size_t m, std::size_t d) {
  if (d == 0 || m <= d) {
    throw Error(ErrorCode::kBoundVacuous, "need m > d >= 1 (m = " + std::to_string(m) +
                                              ", d = " + std::to_string(d) + ")");
  }
  const auto md = static_cast<double>(m);
  const auto dd = static_cast<double>(d);
  return std::sqrt((md - dd) / (dd * (md - 1.0)));
}

Lemma2Witness lemma2_witness(std::span<const PureState> vectors) {
  if (vectors.size() < 2) throw Error(ErrorCode::kEmptyInput, "need at least two vectors");
  Lemma2Witness w;
  w.overlap = -1.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double ov = std::abs(vectors[i].inner(vectors[j]));
      if (ov > w.overlap) {
        w.overlap = ov;
        w.i = i;
        w.j = j;
      }
    }
  }
  const std::size_t d = vectors.front().dim();
  if (vectors.size() > d) {
    w.check = BoundCheck::make("lemma2", w.overlap, lemma2_bound(vectors.size(), d), 1e-12);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Part two helpers

PureState gram_schmidt_residual(const PureState& phi1, const PureState& phi2, double theta) {
  const Complex c = phi1.inner(phi2);
  const double mag2 = std::norm(c);
  if (std::sqrt(mag2) >= 1.0 - kNumTol) {
    throw Error(ErrorCode::kDegenerateResidual, "inputs are parallel (|<phi1|phi2>| = " +
                                                    std::to_string(std::sqrt(mag2)) + ")");
  }
  CVector r = (phi2.amplitudes() - c * phi1.amplitudes()) / std::sqrt(1.0 - mag2);
  r *= std::polar(1.0, theta);
  return PureState::normalized(phi2.layout(), std::move(r));
}

double lambda_max_rank2(Complex alpha, Complex beta, double f12) {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > kNormTol) {
    throw Error(ErrorCode::kBadAmplitudes, "|alpha|^2 + |beta|^2 = " + std::to_string(norm));
  }
  if (f12 < -kNumTol || f12 > 1.0 + kNumTol) {
    throw Error(ErrorCode::kBadAmplitudes, "overlap fidelity out of [0,1]: " + std::to_string(f12));
  }
  const double ab2 = std::norm(alpha) * std::norm(beta);
  const double radicand = std::max(0.0, 1.0 - 4.0 * ab2 * (1.0 - std::clamp(f12, 0.0, 1.0)));
  return 0.5 * (1.0 + std::sqrt(radicand));
}

// ---------------------------------------------------------------------------
// Constants

ThresholdCandidates epsilon_threshold(double d_a) {
  if (!(d_a >= 1.0) || std::floor(d_a) != d_a || !std::isfinite(d_a)) {
    throw Error(ErrorCode::kBadDim, "d_A must be a positive integer");
  }
  // Split d_A = k * 10^n and evaluate 2.4e-14 / k^8 as a decimal mantissa so
  // that powers of ten come out as exactly the nearest double to the
  // decimal result.
  double k = d_a;
  int n = 0;
  while (k >= 10.0 && std::fmod(k, 10.0) == 0.0) {
    k /= 10.0;
    ++n;
  }
  const long double k8 = std::pow(static_cast<long double>(k), 8);
  const long double mantissa = 2.4L / k8;
  std::ostringstream os;
  os.precision(21);
  os << std::scientific << mantissa;
  const std::string m = os.str();
  const auto epos = m.find('e');
  const int mexp = std::stoi(m.substr(epos + 1));
  const std::string decimal = m.substr(0, epos) + "e" + std::to_string(mexp - 14 - 8 * n);

  ThresholdCandidates t;
  t.first = 0.6e-175;
  t.second = std::strtod(decimal.c_str(), nullptr);
  t.second_wins = t.second < t.first;
  t.value = std::min(t.first, t.second);
  return t;
}

bool EpsilonChainReport::all_satisfied() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ChainCheck& c) { return !c.counts() || c.check.satisfied; });
}

EpsilonChainReport chain_constants(double eps, std::size_t d_a) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw Error(ErrorCode::kBadEpsilon, "eps must lie in (0, 1], got " + std::to_string(eps));
  }
  if (d_a == 0) throw Error(ErrorCode::kBadDim, "d_A must be positive");

  EpsilonChainReport r;
  r.eps = eps;
  r.eps_input = eps;
  r.d_a = d_a;
  r.eps_prime_b = 2.0 * std::sqrt(eps);
  r.eps_prime_c = 3.4 * std::pow(eps, 1.0 / 8.0);
  r.eps_dprime_b = 2.0 * std::sqrt(r.eps_prime_b) + r.eps_prime_b;
  r.eps_dprime_c = 2.0 * std::sqrt(r.eps_prime_c) + r.eps_prime_c;
  r.eps_tprime_b = 3.0 * std::sqrt(r.eps_prime_b) + std::sqrt(r.eps_dprime_b) + r.eps_dprime_b;
  r.eps_tprime_c = 3.0 * std::sqrt(r.eps_prime_c) + std::sqrt(r.eps_dprime_c) + r.eps_dprime_c;
  const double overlap_deficit = 4.0 * (std::sqrt(r.eps_prime_b) + std::sqrt(r.eps_tprime_b));
  r.overlap_floor = 1.0 - overlap_deficit;
  r.eps_iv_b = 3.8 * std::pow(eps, 1.0 / 64.0);
  r.eps_iv_c = 3.9 * std::pow(eps, 1.0 / 128.0);
  r.eps_iv_b_chain =
      std::sqrt(eps) + std::sqrt(std::sqrt(r.eps_tprime_b) + std::sqrt(overlap_deficit));
  r.eps_iv_c_chain =
      std::sqrt(eps) + std::sqrt(std::sqrt(r.eps_tprime_c) + std::sqrt(overlap_deficit));
  r.threshold = epsilon_threshold(static_cast<double>(d_a));
  r.eps_zero = r.threshold.value;

  const double inv_da2 = 1.0 / (static_cast<double>(d_a) * static_cast<double>(d_a));
  r.admissible_b = r.eps_dprime_b <= inv_da2;
  r.admissible_c = r.eps_dprime_c <= inv_da2;
  r.cloning_contradiction =
      1.0 - r.eps_iv_b > kCloningCeiling && 1.0 - r.eps_iv_c > kCloningCeiling;

  auto floor = [&](std::string name, double value) {
    r.floors.push_back({std::move(name), value, value <= 0.0});
  };
  floor("product_abc", 1.0 - 3.0 * std::pow(eps, 1.0 / 8.0));
  floor("pair_b", 1.0 - r.eps_prime_b);
  floor("pair_c", 1.0 - r.eps_prime_c);
  floor("superposition_b", 1.0 - r.eps_tprime_b);
  floor("superposition_c", 1.0 - r.eps_tprime_c);
  floor("overlap_a", r.overlap_floor);
  floor("copy_b", 1.0 - r.eps_iv_b);
  floor("copy_c", 1.0 - r.eps_iv_c);
  return r;
}

// ---------------------------------------------------------------------------
// Chain verification

namespace {

struct Superposition {
  Complex alpha;
  Complex beta;
};

std::vector<Superposition> superposition_samples(const ChainOptions& options) {
  std::vector<Superposition> out{{1.0, 0.0}, {0.0, 1.0}};
  for (std::size_t p = 0; p < options.phases; ++p) {
    out.push_back({1.0 / std::sqrt(2.0),
                   std::polar(1.0 / std::sqrt(2.0),
                              kTwoPi * static_cast<double>(p) / static_cast<double>(options.phases))});
  }
  const SpaceLayout qubit{{"S", 2}};
  std::mt19937_64 seeder(options.seed);
  for (std::size_t h = 0; h < options.haar_superpositions; ++h) {
    const auto psi = random_pure(qubit, seeder());
    out.push_back({psi.amplitudes()[0], psi.amplitudes()[1]});
  }
  return out;
}

void add(EpsilonChainReport& r, std::string stage, BoundCheck check, bool applicable,
         bool vacuous) {
  r.checks.push_back(ChainCheck{std::move(stage), std::move(check), vacuous, applicable});
}

/// Floor-type check: value >= floor, vacuous when floor <= 0.
void add_floor(EpsilonChainReport& r, const std::string& stage, double value, double floor,
               bool applicable) {
  add(r, stage, BoundCheck::make(stage, value, floor), applicable, floor <= 0.0);
}

/// Ceiling-type check: value <= ceiling, vacuous when ceiling >= 1.
void add_ceiling(EpsilonChainReport& r, const std::string& stage, double value, double ceiling,
                 bool applicable) {
  add(r, stage, BoundCheck::make(stage, ceiling, value), applicable, ceiling >= 1.0);
}

}  // namespace

EpsilonChainReport chain_verify(const QsbInstance& instance, std::span<const PureState> basis,
                                double eps_hat, const ChainOptions& options) {
  const QsbDims& d = instance.dims();
  const bool guaranteed = d.s > d.a;
  if (options.enforce_applicability && !guaranteed) {
    throw Error(ErrorCode::kChainNotApplicable,
                "the pair selection needs d_S > d_A (d_S = " + std::to_string(d.s) +
                    ", d_A = " + std::to_string(d.a) + ")");
  }
  if (basis.size() != d.s) throw Error(ErrorCode::kBadDim, "basis must have d_S elements");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      if (std::abs(std::abs(basis[i].inner(basis[j])) - target) > kNumTol) {
        throw Error(ErrorCode::kBadDim, "basis is not orthonormal");
      }
    }
  }

  // Stage 1: product extraction on every basis element.
  std::vector<ProductApprox> products;
  for (const auto& k : basis) products.push_back(lemma1_extract(instance, k, Orientation::kB));

  // Pair with the largest |<phi_A^(k)|phi_A^(k')>|, lowest indices on ties.
  std::size_t p1 = 0;
  std::size_t p2 = 1;
  double best_overlap = -1.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const double ov = std::abs(products[i].phi_a.inner(products[j].phi_a));
      if (ov > best_overlap + 1e-14) {
        best_overlap = ov;
        p1 = i;
        p2 = j;
      }
    }
  }

  // Superpositions alpha|p1> + beta|p2> and their outputs.
  const auto samples = superposition_samples(options);
  std::vector<PureState> sample_states;
  for (const auto& s : samples) {
    sample_states.push_back(PureState::normalized(
        basis[p1].layout(), s.alpha * basis[p1].amplitudes() + s.beta * basis[p2].amplitudes()));
  }
  double measured = measure_eps(instance, basis).eps_hat;
  measured = std::max(measured, measure_eps(instance, sample_states).eps_hat);
  const double eps = std::clamp(std::max(eps_hat, measured),
                                std::numeric_limits<double>::min(), 1.0);

  EpsilonChainReport r = chain_constants(eps, d.a);
  r.eps_input = eps_hat;
  r.pair_first = p1;
  r.pair_second = p2;

  // Lemma 1 floors on the basis.
  const auto floors = lemma1_floors(eps, Orientation::kB);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const std::string tag = "[" + std::to_string(k) + "]";
    add_floor(r, "product_abc" + tag, products[k].f_abc, 1.0 - 3.0 * std::pow(eps, 0.125), true);
    add_floor(r, "pair_b" + tag, products[k].f_ab, 1.0 - r.eps_prime_b, true);
    add_floor(r, "pair_c" + tag, products[k].f_ac, 1.0 - r.eps_prime_c, true);
  }
  (void)floors;

  // Near-orthogonality of the product images.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const double ov_a = std::abs(products[i].phi_a.inner(products[j].phi_a));
      const double ov_b = std::abs(products[i].phi_b.inner(products[j].phi_b));
      const double ov_c = std::abs(products[i].phi_c.inner(products[j].phi_c));
      const std::string tag = "[" + std::to_string(i) + "," + std::to_string(j) + "]";
      add_ceiling(r, "orthogonality_b" + tag, ov_a * ov_b, r.eps_dprime_b, true);
      add_ceiling(r, "orthogonality_c" + tag, ov_a * ov_c, r.eps_dprime_c, true);
    }
  }

  // The selected A-pair must overlap: |<.|.>|^2 >= 1/d_A^2 when d_S > d_A.
  const PureState& a1 = products[p1].phi_a;
  const PureState& a2 = products[p2].phi_a;
  const double f_a12 = fidelity_pure(a1, a2);
  const double inv_da2 = 1.0 / static_cast<double>(d.a * d.a);
  add(r, "pair_overlap_a", BoundCheck::make("pair_overlap_a", f_a12, inv_da2), guaranteed, false);
  if (guaranteed) {
    const double bound = lemma2_bound(d.s, d.a);
    add(r, "gram_bound_a", BoundCheck::make("gram_bound_a", best_overlap, bound, 1e-12), true, false);
  }

  struct Route {
    std::string name;
    bool admissible;
    double eps_prime;
    double eps_dprime;
    double eps_tprime;
    double eps_iv;
    const Isometry* v;
    PureState x1;
    PureState x2;
    std::vector<bool> keep_ax;  // over [A,B,C]
    std::vector<bool> keep_x;
  };
  std::vector<Route> routes;
  routes.push_back({"b", r.admissible_b, r.eps_prime_b, r.eps_dprime_b, r.eps_tprime_b, r.eps_iv_b,
                    &instance.v_abs(), products[p1].phi_b, products[p2].phi_b,
                    {true, true, false}, {false, true, false}});
  routes.push_back({"c", r.admissible_c, r.eps_prime_c, r.eps_dprime_c, r.eps_tprime_c, r.eps_iv_c,
                    &instance.v_acs(), products[p1].phi_c, products[p2].phi_c,
                    {true, false, true}, {false, false, true}});

  const std::size_t out_dims[] = {d.a, d.b, d.c};
  std::vector<CMatrix> rho_abc;
  std::vector<ProductApprox> sample_products;
  for (const auto& psi : sample_states) {
    rho_abc.push_back(instance.channel().apply_matrix(projector(psi.amplitudes())));
    sample_products.push_back(lemma1_extract(instance, psi, Orientation::kB));
  }

  const bool route_b_ok = guaranteed && r.admissible_b;
  double copy_min[2] = {1.0, 1.0};
  for (std::size_t ri = 0; ri < routes.size(); ++ri) {
    Route& route = routes[ri];
    const bool premise = guaranteed && route.admissible;
    const double ov_x = std::abs(route.x1.inner(route.x2));
    add_ceiling(r, "pair_overlap_" + route.name, ov_x, std::sqrt(route.eps_dprime), premise);

    std::optional<PureState> residual0;
    try {
      residual0 = gram_schmidt_residual(route.x1, route.x2, 0.0);
    } catch (const Error&) {
      r.residual_degenerate = true;
      continue;
    }
    const CVector p1_vec = linalg::kron(a1.amplitudes(), route.x1.amplitudes());
    const CVector a2_res = linalg::kron(a2.amplitudes(), residual0->amplitudes());
    const CVector a1_res = linalg::kron(a1.amplitudes(), residual0->amplitudes());

    std::vector<CVector> psi_ax;
    std::vector<CMatrix> rho_ax;
    std::vector<CMatrix> rho_x;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      psi_ax.push_back(route.v->matrix() * sample_states[s].amplitudes());
      rho_ax.push_back(linalg::partial_trace(rho_abc[s], out_dims, route.keep_ax));
      rho_x.push_back(linalg::partial_trace(rho_abc[s], out_dims, route.keep_x));
    }
    auto u_of = [&](std::size_t s, double theta) -> CVector {
      return samples[s].alpha * p1_vec + samples[s].beta * std::polar(1.0, theta) * a2_res;
    };
    auto t_of = [&](std::size_t s, double theta) -> CVector {
      return samples[s].alpha * p1_vec + samples[s].beta * std::polar(1.0, theta) * a1_res;
    };

    const double theta = maximize_phase([&](double th) {
      double worst = 1.0;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        worst = std::min(worst, std::norm(psi_ax[s].dot(u_of(s, th))));
      }
      return worst;
    });
    const double theta_prime = maximize_phase([&](double th) {
      double worst = 1.0;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        worst = std::min(worst, expectation(rho_ax[s], t_of(s, th)));
      }
      return worst;
    });
    (ri == 0 ? r.theta_b : r.theta_c) = theta;
    (ri == 0 ? r.theta_prime_b : r.theta_prime_c) = theta_prime;

    const double mix_floor = 1.0 - (std::sqrt(route.eps_prime) + std::sqrt(route.eps_tprime));
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const std::string tag = "_" + route.name + "[" + std::to_string(s) + "]";
      const CVector u = u_of(s, theta);
      const CVector t = t_of(s, theta_prime);
      add_floor(r, "superposition" + tag, std::norm(psi_ax[s].dot(u)), 1.0 - route.eps_tprime, premise);

      // Product of this superposition against the two-term expansion, and
      // its A-marginal against the rank-2 mixture.
      const ProductApprox& sp = sample_products[s];
      const CVector& phi_x = ri == 0 ? sp.phi_b.amplitudes() : sp.phi_c.amplitudes();
      const CVector prod = linalg::kron(sp.phi_a.amplitudes(), phi_x);
      add_floor(r, "product_vs_superposition" + tag, std::norm(prod.dot(u)), mix_floor, premise);
      const CMatrix mix = std::norm(samples[s].alpha) * projector(a1.amplitudes()) +
                          std::norm(samples[s].beta) * projector(a2.amplitudes());
      const double f_mix = expectation(mix, sp.phi_a.amplitudes());
      add_floor(r, "product_vs_mixture" + tag, f_mix, mix_floor, premise);
      const double lam = lambda_max_rank2(samples[s].alpha, samples[s].beta, f_a12);
      add(r, "mixture_top_eigenvalue" + tag,
          BoundCheck::make("mixture_top_eigenvalue" + tag, lam, f_mix), true, false);

      add_floor(r, "aligned_expansion" + tag, std::norm(u.dot(t)), r.overlap_floor, premise && route_b_ok);
      add_floor(r, "copy_pair" + tag, expectation(rho_ax[s], t), 1.0 - route.eps_iv, premise && route_b_ok);
      const CVector w = samples[s].alpha * route.x1.amplitudes() +
                        samples[s].beta * std::polar(1.0, theta_prime) * residual0->amplitudes();
      const double copy = expectation(rho_x[s], w);
      copy_min[ri] = std::min(copy_min[ri], copy);
      add_floor(r, "copy" + tag, copy, 1.0 - route.eps_iv, premise && route_b_ok);
    }
  }
  add_floor(r, "overlap_a", f_a12, r.overlap_floor, route_b_ok);
  r.copy_fidelity_b = copy_min[0];
  r.copy_fidelity_c = copy_min[1];
  return r;
}

// ---------------------------------------------------------------------------
// Cloner

KrausChannel cloner_channel() {
  // P_sym = (1 + SWAP) / 2 on two qubits; K_j = sqrt(2/3) P_sym (1 (x) |j>).
  CMatrix p_sym = CMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      p_sym(2 * i + j, 2 * i + j) += 0.5;
      p_sym(2 * j + i, 2 * i + j) += 0.5;
    }
  }
  std::vector<CMatrix> ops;
  for (int j = 0; j < 2; ++j) {
    CMatrix embed = CMatrix::Zero(4, 2);
    for (int i = 0; i < 2; ++i) embed(2 * i + j, i) = 1.0;
    ops.push_back(std::sqrt(2.0 / 3.0) * p_sym * embed);
  }
  return KrausChannel(SpaceLayout{{"S", 2}}, SpaceLayout{{"B", 2}, {"C", 2}}, std::move(ops));
}

std::pair<DensityMatrix, DensityMatrix> cloner_baseline(const PureState& psi) {
  if (psi.layout().size() != 1 || psi.dim() != 2) {
    throw Error(ErrorCode::kBadDim, "cloner baseline takes a single qubit, got " +
                                        psi.layout().to_string());
  }
  const KrausChannel cloner = cloner_channel();
  const DensityMatrix rho_bc(cloner.output_layout(), cloner.apply_matrix(projector(psi.amplitudes())));
  return {partial_trace(rho_bc, {"B"}), partial_trace(rho_bc, {"C"})};
}

QsbInstance cloner_instance() {
  const KrausChannel cloner = cloner_channel();
  const QsbDims dims{2, 1, 2, 2};
  // A has dimension one, so the Kraus matrices carry over unchanged.
  KrausChannel channel(dims.source(), dims.outputs(), cloner.kraus_ops());
  const CMatrix id = CMatrix::Identity(2, 2);
  return QsbInstance(std::move(channel), Isometry(dims.source(), dims.ab(), id),
                     Isometry(dims.source(), dims.ac(), id));
}

}  // namespace qsblab
