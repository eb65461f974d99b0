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

// Fidelity, trace distance, and the fidelity inequalities used by the
// broadcasting bounds, each available as a plain number and as a BoundCheck.

#pragma once

#include <string>
#include <vector>

#include "qsblab/hilbert.hpp"

namespace qsblab {

/// Uhlmann fidelity in [0, 1] (up to kNumTol of rounding above 1).
struct FidelityValue {
  double value = 0.0;

  explicit FidelityValue(double v);
  operator double() const { return value; }
};

/// A checkable inequality lhs >= rhs. Checks that do not fit that shape are
/// rearranged into it before being recorded.
struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool satisfied = false;

  static BoundCheck make(std::string name, double lhs, double rhs, double tol = kNumTol);
};

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, computed as the squared trace
/// norm of A^dagger B for factorizations rho = A A^dagger, sigma = B B^dagger.
FidelityValue fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// <psi|rho|psi>
FidelityValue fidelity_pure(const DensityMatrix& rho, const PureState& psi);
/// |<phi|psi>|^2
FidelityValue fidelity_pure(const PureState& phi, const PureState& psi);
/// Raw-matrix variant for code that manipulates unvalidated operators.
double fidelity_matrices(const CMatrix& rho, const CMatrix& sigma);

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sqrt F(rho;omega) >= 1 - sqrt(1 - F(rho;sigma)) - sqrt(1 - F(sigma;omega))
BoundCheck check_triangle(const DensityMatrix& rho, const DensityMatrix& omega,
                          const DensityMatrix& sigma);
/// F(rho;psi) >= 1 - sqrt(1 - F(rho;sigma)) - sqrt(1 - F(sigma;psi))
BoundCheck check_triangle_pure(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const PureState& psi);

/// Fuchs-van de Graaf: 1 - sqrt F <= D <= sqrt(1 - F). Both sides checked;
/// the returned check is the one with smaller slack.
BoundCheck check_fuchs_van_de_graaf(const DensityMatrix& rho, const DensityMatrix& sigma);

/// F(rho_K; sigma_K) >= F(rho; sigma) where K = keep.
BoundCheck check_monotonicity(const DensityMatrix& rho, const DensityMatrix& sigma,
                              const std::vector<std::string>& keep);

/// Given a purification |phi> of rho_A (on rho_A's labels plus extra
/// labels), returns the purification |chi> of sigma_A on the same space that
/// maximizes |<phi|chi>|, so that |<phi|chi>|^2 = F(rho_A; sigma_A).
/// Throws BadPurification if |phi> does not reduce to rho_A or the extra
/// space is too small to purify sigma_A.
PureState uhlmann_partner(const DensityMatrix& rho_a, const DensityMatrix& sigma_a,
                          const PureState& purification_of_rho);

/// F(rho_A; sigma_A) <= |<phi|chi>|^2 for the Uhlmann partner.
BoundCheck check_purification_bound(const DensityMatrix& rho_a, const DensityMatrix& sigma_a,
                                    const PureState& purification_of_rho);

/// Convexity bounds for F(rho; psi) = <psi|rho|psi>.
///
/// `top_eigenvalue` checks F <= lambda_max. `best_eigenvector` checks
/// F <= max_i |<phi_i|psi>|^2 over eigenvectors, which holds for every input.
/// `top_eigenvector` checks F <= |<phi_max|psi>|^2 against the eigenvector of
/// the largest eigenvalue; that form only holds when F > 1/2, and
/// `top_eigenvector_applies` records whether the input is in that regime.
struct ConvexityReport {
  double lambda_max = 0.0;
  CVector top_vector;
  double fidelity = 0.0;
  BoundCheck top_eigenvalue;
  BoundCheck top_eigenvector;
  BoundCheck best_eigenvector;
  bool top_eigenvector_applies = false;

  /// The tighter of the two top-eigenpair bounds (smaller slack); the
  /// eigenvector bound only competes when it applies.
  const BoundCheck& tighter() const;
};

ConvexityReport max_eig_convexity(const DensityMatrix& rho, const PureState& psi);

}  // namespace qsblab
