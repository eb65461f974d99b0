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

#include "qsblab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsblab/error.hpp"

namespace qsblab::linalg {

void fix_phase(Eigen::Ref<CVector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 1e-12) {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(std::abs(v[i]), 0.0);
      return;
    }
  }
}

HermitianEigen hermitian_eigen(const CMatrix& m) {
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
  const Eigen::Index n = herm.rows();
  HermitianEigen out{RVector(n), CMatrix(n, n)};
  // Eigen sorts ascending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    fix_phase(out.vectors.col(i));
  }
  return out;
}

std::pair<double, CVector> top_eigenpair(const CMatrix& m) {
  auto eig = hermitian_eigen(m);
  return {eig.values[0], eig.vectors.col(0)};
}

CMatrix psd_factor(const CMatrix& m) {
  const auto eig = hermitian_eigen(m);
  Eigen::Index rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > kRankCutoff) ++rank;
  CMatrix a(m.rows(), rank);
  for (Eigen::Index i = 0; i < rank; ++i) {
    a.col(i) = std::sqrt(eig.values[i]) * eig.vectors.col(i);
  }
  return a;
}

CMatrix psd_sqrt(const CMatrix& m) {
  const auto eig = hermitian_eigen(m);
  RVector roots(eig.values.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    roots[i] = eig.values[i] > kRankCutoff ? std::sqrt(eig.values[i]) : 0.0;
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()[0];
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

CMatrix orthonormalize_columns(const CMatrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

double isometry_defect(const CMatrix& m) {
  const CMatrix gram = m.adjoint() * m;
  return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      const std::vector<bool>& keep) {
  const std::size_t n = dims.size();
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  for (std::size_t i = 0; i < n; ++i) (keep[i] ? kept_dim : traced_dim) *= dims[i];
  const std::size_t total = kept_dim * traced_dim;
  if (static_cast<std::size_t>(m.rows()) != total || m.rows() != m.cols()) {
    throw Error(ErrorCode::kLayoutMismatch, "partial_trace: matrix side does not match layout");
  }

  // full_index[k * traced_dim + t] = flat index of (kept multi-index k,
  // traced multi-index t).
  std::vector<std::size_t> full_index(total);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t k = 0;
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (keep[i]) {
        k = k * dims[i] + digits[i];
      } else {
        t = t * dims[i] + digits[i];
      }
    }
    full_index[k * traced_dim + t] = flat;
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < dims[i]) break;
      digits[i] = 0;
    }
  }

  CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
  for (std::size_t k1 = 0; k1 < kept_dim; ++k1) {
    for (std::size_t k2 = 0; k2 < kept_dim; ++k2) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        acc += m(full_index[k1 * traced_dim + t], full_index[k2 * traced_dim + t]);
      }
      out(k1, k2) = acc;
    }
  }
  return out;
}

std::vector<std::size_t> permutation_indices(std::span<const std::size_t> dims,
                                             std::span<const std::size_t> new_order) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> old_strides(n, 1);
  for (std::size_t i = n; i-- > 1;) old_strides[i - 1] = old_strides[i] * dims[i];
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());

  std::vector<std::size_t> new_dims(n);
  for (std::size_t i = 0; i < n; ++i) new_dims[i] = dims[new_order[i]];

  std::vector<std::size_t> map(total);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t old_flat = 0;
    for (std::size_t i = 0; i < n; ++i) old_flat += digits[i] * old_strides[new_order[i]];
    map[flat] = old_flat;
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < new_dims[i]) break;
      digits[i] = 0;
    }
  }
  return map;
}

}  // namespace qsblab::linalg
