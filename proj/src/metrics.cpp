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

#include "qsblab/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace qsblab {

namespace {

void require_same_layout(const SpaceLayout& a, const SpaceLayout& b) {
  if (!(a == b)) throw Error(ErrorCode::kLayoutMismatch, a.to_string() + " vs " + b.to_string());
}

double sqrt_deficit(double f) { return std::sqrt(std::max(0.0, 1.0 - f)); }

}  // namespace

FidelityValue::FidelityValue(double v) : value(v) {
  if (v < -kNumTol || v > 1.0 + kNumTol || std::isnan(v)) {
    throw Error(ErrorCode::kBadDim, "fidelity out of range: " + std::to_string(v));
  }
  value = std::max(v, 0.0);
}

BoundCheck BoundCheck::make(std::string name, double lhs, double rhs, double tol) {
  BoundCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = lhs - rhs;
  c.satisfied = c.slack >= -tol;
  return c;
}

double fidelity_matrices(const CMatrix& rho, const CMatrix& sigma) {
  const CMatrix a = linalg::psd_factor(rho);
  const CMatrix b = linalg::psd_factor(sigma);
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  const double root = linalg::trace_norm(a.adjoint() * b);
  return root * root;
}

FidelityValue fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_layout(rho.layout(), sigma.layout());
  return FidelityValue(fidelity_matrices(rho.matrix(), sigma.matrix()));
}

FidelityValue fidelity_pure(const DensityMatrix& rho, const PureState& psi) {
  require_same_layout(rho.layout(), psi.layout());
  const CVector& v = psi.amplitudes();
  return FidelityValue(v.dot(rho.matrix() * v).real());
}

FidelityValue fidelity_pure(const PureState& phi, const PureState& psi) {
  return FidelityValue(std::norm(phi.inner(psi)));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_layout(rho.layout(), sigma.layout());
  const auto eig = linalg::hermitian_eigen(rho.matrix() - sigma.matrix());
  return 0.5 * eig.values.cwiseAbs().sum();
}

BoundCheck check_triangle(const DensityMatrix& rho, const DensityMatrix& omega,
                          const DensityMatrix& sigma) {
  const double f_ro = fidelity(rho, omega);
  const double f_rs = fidelity(rho, sigma);
  const double f_so = fidelity(sigma, omega);
  return BoundCheck::make("triangle", std::sqrt(f_ro), 1.0 - sqrt_deficit(f_rs) - sqrt_deficit(f_so));
}

BoundCheck check_triangle_pure(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const PureState& psi) {
  const double f_rp = fidelity_pure(rho, psi);
  const double f_rs = fidelity(rho, sigma);
  const double f_sp = fidelity_pure(sigma, psi);
  return BoundCheck::make("triangle_pure", f_rp, 1.0 - sqrt_deficit(f_rs) - sqrt_deficit(f_sp));
}

BoundCheck check_fuchs_van_de_graaf(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double f = fidelity(rho, sigma);
  const double d = trace_distance(rho, sigma);
  auto lower = BoundCheck::make("fvdg_lower", d, 1.0 - std::sqrt(f));
  auto upper = BoundCheck::make("fvdg_upper", sqrt_deficit(f), d);
  return lower.slack <= upper.slack ? lower : upper;
}

BoundCheck check_monotonicity(const DensityMatrix& rho, const DensityMatrix& sigma,
                              const std::vector<std::string>& keep) {
  require_same_layout(rho.layout(), sigma.layout());
  const double joint = fidelity(rho, sigma);
  const double marginal = fidelity(partial_trace(rho, keep), partial_trace(sigma, keep));
  return BoundCheck::make("monotonicity", marginal, joint);
}

PureState uhlmann_partner(const DensityMatrix& rho_a, const DensityMatrix& sigma_a,
                          const PureState& purification_of_rho) {
  require_same_layout(rho_a.layout(), sigma_a.layout());
  const SpaceLayout& full = purification_of_rho.layout();

  // Reorder to (A labels..., remaining labels...) so the amplitudes read as a
  // dA x dR matrix M with M M^dagger = rho_A.
  std::vector<std::string> order = rho_a.layout().labels();
  for (const auto& label : full.labels()) {
    if (!rho_a.layout().contains(label)) order.push_back(label);
  }
  for (const auto& label : rho_a.layout().labels()) {
    if (!full.contains(label)) {
      throw Error(ErrorCode::kBadPurification, "purification lacks subsystem '" + label + "'");
    }
  }
  const PureState phi = permute(purification_of_rho, order);
  const auto d_a = static_cast<Eigen::Index>(rho_a.dim());
  const auto d_r = static_cast<Eigen::Index>(full.total_dim()) / d_a;
  CMatrix m(d_a, d_r);
  for (Eigen::Index i = 0; i < d_a; ++i) {
    for (Eigen::Index j = 0; j < d_r; ++j) m(i, j) = phi.amplitudes()[i * d_r + j];
  }
  const double mismatch = (m * m.adjoint() - rho_a.matrix()).cwiseAbs().maxCoeff();
  if (mismatch > kNumTol) {
    throw Error(ErrorCode::kBadPurification,
                "purification does not reduce to rho_A (max deviation " + std::to_string(mismatch) + ")");
  }

  const CMatrix root_sigma = linalg::psd_factor(sigma_a.matrix());  // E sqrt(S), dA x r
  const Eigen::Index rank = root_sigma.cols();
  if (rank > d_r) {
    throw Error(ErrorCode::kBadPurification, "purifying space too small for sigma_A");
  }
  const CMatrix x = m.adjoint() * root_sigma;  // dR x r
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CMatrix y = svd.matrixV() * svd.matrixU().adjoint();  // r x dR, orthonormal rows
  const CMatrix n = root_sigma * y;                            // dA x dR, N N^dagger = sigma_A

  CVector amps(d_a * d_r);
  for (Eigen::Index i = 0; i < d_a; ++i) {
    for (Eigen::Index j = 0; j < d_r; ++j) amps[i * d_r + j] = n(i, j);
  }
  const PureState chi = PureState::normalized(phi.layout(), std::move(amps));
  return permute(chi, full.labels());
}

BoundCheck check_purification_bound(const DensityMatrix& rho_a, const DensityMatrix& sigma_a,
                                    const PureState& purification_of_rho) {
  const PureState chi = uhlmann_partner(rho_a, sigma_a, purification_of_rho);
  return BoundCheck::make("purification", fidelity_pure(purification_of_rho, chi),
                          fidelity(rho_a, sigma_a));
}

const BoundCheck& ConvexityReport::tighter() const {
  if (top_eigenvector_applies && top_eigenvector.slack < top_eigenvalue.slack) return top_eigenvector;
  return top_eigenvalue;
}

ConvexityReport max_eig_convexity(const DensityMatrix& rho, const PureState& psi) {
  require_same_layout(rho.layout(), psi.layout());
  const auto eig = linalg::hermitian_eigen(rho.matrix());
  const CVector& v = psi.amplitudes();

  ConvexityReport r;
  r.lambda_max = eig.values[0];
  r.top_vector = eig.vectors.col(0);
  r.fidelity = fidelity_pure(rho, psi);

  double best = 0.0;
  for (Eigen::Index i = 0; i < eig.vectors.cols(); ++i) {
    best = std::max(best, std::norm(eig.vectors.col(i).dot(v)));
  }
  r.top_eigenvalue = BoundCheck::make("convexity_lambda_max", r.lambda_max, r.fidelity);
  r.top_eigenvector =
      BoundCheck::make("convexity_top_vector", std::norm(r.top_vector.dot(v)), r.fidelity);
  r.best_eigenvector = BoundCheck::make("convexity_best_vector", best, r.fidelity);
  r.top_eigenvector_applies = r.fidelity > 0.5;
  return r;
}

}  // namespace qsblab
