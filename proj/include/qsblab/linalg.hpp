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

// Dense complex linear-algebra helpers shared by the state, metric and
// optimizer code. Everything here works on raw Eigen objects; layout
// bookkeeping lives in hilbert.hpp.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsblab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

namespace linalg {

/// Eigenpairs of a Hermitian matrix, sorted by descending eigenvalue.
/// Each eigenvector has its first non-negligible component made real
/// positive so that the output is reproducible across calls.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;  // columns
};

HermitianEigen hermitian_eigen(const CMatrix& m);

/// Returns the top eigenpair (largest eigenvalue) of a Hermitian matrix.
std::pair<double, CVector> top_eigenpair(const CMatrix& m);

/// Fixes the global phase of `v` so its first component above 1e-12 in
/// magnitude is real and positive.
void fix_phase(Eigen::Ref<CVector> v);

/// Factor A with A A^dagger = m for a PSD matrix, keeping only eigenvalues
/// above kRankCutoff. A has one column per retained eigenvalue.
CMatrix psd_factor(const CMatrix& m);

/// Principal square root of a PSD matrix (eigenvalues below kRankCutoff
/// are set to zero).
CMatrix psd_sqrt(const CMatrix& m);

double trace_norm(const CMatrix& m);
double spectral_norm(const CMatrix& m);

/// Kronecker product with the first factor as the slow (most significant)
/// index.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

/// Orthonormalizes the columns of `m` by a thin QR factorization with the
/// sign convention that the triangular factor has a positive real diagonal.
CMatrix orthonormalize_columns(const CMatrix& m);

/// Largest entry of |m^dagger m - I|.
double isometry_defect(const CMatrix& m);

/// Partial trace by explicit index contraction. `dims` lists the subsystem
/// dimensions in layout order and `keep` flags which subsystems survive.
CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      const std::vector<bool>& keep);

/// Maps a row-major multi-index to the flat index after reordering
/// subsystems; new_order[i] is the old position of the subsystem placed at i.
std::vector<std::size_t> permutation_indices(std::span<const std::size_t> dims,
                                             std::span<const std::size_t> new_order);

}  // namespace linalg
}  // namespace qsblab
