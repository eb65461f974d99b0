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

#include "qsblab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace qsblab {

// ---------------------------------------------------------------------------
// SpaceLayout

SpaceLayout::SpaceLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.label.empty()) throw Error(ErrorCode::kBadLayout, "empty subsystem label");
    if (s.dim == 0) throw Error(ErrorCode::kBadLayout, "subsystem '" + s.label + "' has dim 0");
    if (!seen.insert(s.label).second) {
      throw Error(ErrorCode::kLabelClash, "duplicate label '" + s.label + "'");
    }
    total_dim_ *= s.dim;
  }
}

std::vector<std::string> SpaceLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.label);
  return out;
}

std::vector<std::size_t> SpaceLayout::dims() const {
  std::vector<std::size_t> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.dim);
  return out;
}

bool SpaceLayout::contains(const std::string& label) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::size_t SpaceLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  throw Error(ErrorCode::kLabelUnknown, "label '" + label + "' not in layout " + to_string());
}

std::size_t SpaceLayout::dim_of(const std::string& label) const {
  return subsystems_[index_of(label)].dim;
}

SpaceLayout SpaceLayout::concat(const SpaceLayout& other) const {
  for (const auto& s : other.subsystems_) {
    if (contains(s.label)) {
      throw Error(ErrorCode::kLabelClash, "label '" + s.label + "' present in both layouts");
    }
  }
  std::vector<Subsystem> joined = subsystems_;
  joined.insert(joined.end(), other.subsystems_.begin(), other.subsystems_.end());
  return SpaceLayout(std::move(joined));
}

SpaceLayout SpaceLayout::restrict_to(const std::vector<std::string>& keep) const {
  for (const auto& label : keep) index_of(label);
  std::vector<Subsystem> kept;
  for (const auto& s : subsystems_) {
    if (std::find(keep.begin(), keep.end(), s.label) != keep.end()) kept.push_back(s);
  }
  return SpaceLayout(std::move(kept));
}

std::string SpaceLayout::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (i) os << ',';
    os << subsystems_[i].label << ':' << subsystems_[i].dim;
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(SpaceLayout layout, CVector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
    throw Error(ErrorCode::kLayoutMismatch, "amplitude vector length " +
                                                std::to_string(amplitudes_.size()) +
                                                " does not match layout " + layout_.to_string());
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw Error(ErrorCode::kNotNormalized, "state norm " + std::to_string(norm));
  }
}

PureState PureState::normalized(SpaceLayout layout, CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < 1e-300) throw Error(ErrorCode::kNotNormalized, "zero vector");
  amplitudes /= norm;
  return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis(SpaceLayout layout, std::size_t index) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  if (index >= layout.total_dim()) throw Error(ErrorCode::kBadDim, "basis index out of range");
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return PureState(std::move(layout), std::move(v));
}

Complex PureState::inner(const PureState& other) const {
  if (!(layout_ == other.layout_)) {
    throw Error(ErrorCode::kLayoutMismatch, layout_.to_string() + " vs " + other.layout_.to_string());
  }
  return amplitudes_.dot(other.amplitudes_);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(SpaceLayout layout, CMatrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(layout_.total_dim());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw Error(ErrorCode::kLayoutMismatch, "matrix side does not match layout " + layout_.to_string());
  }
  const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermTol) {
    throw Error(ErrorCode::kNotHermitian, "max |rho - rho^dagger| = " + std::to_string(asym));
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kNormTol) {
    throw Error(ErrorCode::kNotNormalized, "trace " + std::to_string(tr));
  }
  const auto eig = linalg::hermitian_eigen(matrix_);
  const double min_eig = eig.values[n - 1];
  if (min_eig < -kPsdTol) {
    throw Error(ErrorCode::kNotPsd, "minimum eigenvalue " + std::to_string(min_eig));
  }
  if (min_eig < 0.0) {
    const RVector clipped = eig.values.cwiseMax(0.0);
    matrix_ = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const CVector& v = psi.amplitudes();
  return DensityMatrix(psi.layout(), v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(SpaceLayout layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  return DensityMatrix(std::move(layout), CMatrix::Identity(n, n) / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Isometry

Isometry::Isometry(SpaceLayout input_layout, SpaceLayout output_layout, CMatrix matrix)
    : input_layout_(std::move(input_layout)),
      output_layout_(std::move(output_layout)),
      matrix_(std::move(matrix)) {
  const auto in = static_cast<Eigen::Index>(input_layout_.total_dim());
  const auto out = static_cast<Eigen::Index>(output_layout_.total_dim());
  if (matrix_.rows() != out || matrix_.cols() != in) {
    throw Error(ErrorCode::kLayoutMismatch, "isometry matrix shape does not match layouts");
  }
  if (out < in) throw Error(ErrorCode::kNotIsometry, "output dimension smaller than input");
  const double defect = linalg::isometry_defect(matrix_);
  if (defect > kIsoTol) {
    throw Error(ErrorCode::kNotIsometry, "max |V^dagger V - 1| = " + std::to_string(defect));
  }
}

Isometry Isometry::identity(SpaceLayout layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  return Isometry(layout, layout, CMatrix::Identity(n, n));
}

// ---------------------------------------------------------------------------
// Operations

PureState tensor(const PureState& a, const PureState& b) {
  return PureState(a.layout().concat(b.layout()), linalg::kron(a.amplitudes(), b.amplitudes()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(a.layout().concat(b.layout()), linalg::kron(a.matrix(), b.matrix()));
}

namespace {

std::vector<bool> keep_mask(const SpaceLayout& layout, const std::vector<std::string>& keep) {
  if (keep.empty()) throw Error(ErrorCode::kEmptyKeep, "partial trace must keep a subsystem");
  std::vector<bool> mask(layout.size(), false);
  for (const auto& label : keep) mask[layout.index_of(label)] = true;
  return mask;
}

std::vector<std::size_t> order_positions(const SpaceLayout& layout,
                                         const std::vector<std::string>& new_order) {
  if (new_order.size() != layout.size()) {
    throw Error(ErrorCode::kBadPermutation, "expected " + std::to_string(layout.size()) + " labels");
  }
  std::vector<std::size_t> positions;
  std::vector<bool> used(layout.size(), false);
  for (const auto& label : new_order) {
    if (!layout.contains(label)) throw Error(ErrorCode::kBadPermutation, "unknown label '" + label + "'");
    const std::size_t pos = layout.index_of(label);
    if (used[pos]) throw Error(ErrorCode::kBadPermutation, "label '" + label + "' repeated");
    used[pos] = true;
    positions.push_back(pos);
  }
  return positions;
}

SpaceLayout reordered(const SpaceLayout& layout, const std::vector<std::size_t>& positions) {
  std::vector<Subsystem> subs;
  for (auto p : positions) subs.push_back(layout.subsystems()[p]);
  return SpaceLayout(std::move(subs));
}

}  // namespace

CMatrix partial_trace(const CMatrix& op, const SpaceLayout& layout,
                      const std::vector<std::string>& keep) {
  const auto mask = keep_mask(layout, keep);
  const auto dims = layout.dims();
  return linalg::partial_trace(op, dims, mask);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  CMatrix reduced = partial_trace(rho.matrix(), rho.layout(), keep);
  return DensityMatrix(rho.layout().restrict_to(keep), std::move(reduced));
}

PureState purify(const DensityMatrix& rho, const std::string& env_label) {
  const auto eig = linalg::hermitian_eigen(rho.matrix());
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(eig.values.size()) &&
         eig.values[static_cast<Eigen::Index>(rank)] > kRankCutoff) {
    ++rank;
  }
  rank = std::max<std::size_t>(rank, 1);
  const SpaceLayout layout = rho.layout().concat(SpaceLayout{{env_label, rank}});
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  const auto n = static_cast<Eigen::Index>(rho.dim());
  const auto r = static_cast<Eigen::Index>(rank);
  for (Eigen::Index k = 0; k < r; ++k) {
    const double weight = std::sqrt(std::max(eig.values[k], 0.0));
    for (Eigen::Index i = 0; i < n; ++i) amps[i * r + k] = weight * eig.vectors(i, k);
  }
  return PureState::normalized(layout, std::move(amps));
}

PureState permute(const PureState& psi, const std::vector<std::string>& new_order) {
  const auto positions = order_positions(psi.layout(), new_order);
  const auto dims = psi.layout().dims();
  const auto map = linalg::permutation_indices(dims, positions);
  CVector out(psi.amplitudes().size());
  for (std::size_t j = 0; j < map.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = psi.amplitudes()[static_cast<Eigen::Index>(map[j])];
  }
  return PureState(reordered(psi.layout(), positions), std::move(out));
}

DensityMatrix permute(const DensityMatrix& rho, const std::vector<std::string>& new_order) {
  const auto positions = order_positions(rho.layout(), new_order);
  const auto dims = rho.layout().dims();
  const auto map = linalg::permutation_indices(dims, positions);
  const auto n = static_cast<Eigen::Index>(map.size());
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = rho.matrix()(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
    }
  }
  return DensityMatrix(reordered(rho.layout(), positions), std::move(out));
}

PureState apply_isometry(const Isometry& v, const PureState& psi) {
  if (!(psi.layout() == v.input_layout())) {
    throw Error(ErrorCode::kLayoutMismatch, "state layout " + psi.layout().to_string() +
                                                " vs isometry input " + v.input_layout().to_string());
  }
  return PureState(v.output_layout(), v.matrix() * psi.amplitudes());
}

DensityMatrix apply_isometry(const Isometry& v, const DensityMatrix& rho) {
  if (!(rho.layout() == v.input_layout())) {
    throw Error(ErrorCode::kLayoutMismatch, "state layout " + rho.layout().to_string() +
                                                " vs isometry input " + v.input_layout().to_string());
  }
  return DensityMatrix(v.output_layout(), v.matrix() * rho.matrix() * v.matrix().adjoint());
}

CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

PureState random_pure(const SpaceLayout& layout, std::uint64_t seed) {
  CVector v = gaussian_matrix(layout.total_dim(), 1, seed).col(0);
  return PureState::normalized(layout, std::move(v));
}

DensityMatrix random_density(const SpaceLayout& layout, std::size_t rank, std::uint64_t seed) {
  if (rank == 0 || rank > layout.total_dim()) {
    throw Error(ErrorCode::kBadRank, "rank " + std::to_string(rank) + " for dimension " +
                                         std::to_string(layout.total_dim()));
  }
  // Rows index the system, columns the purifying ancilla, so G G^dagger is
  // the system marginal of the normalized Gaussian purification.
  CMatrix g = gaussian_matrix(layout.total_dim(), rank, seed);
  g /= g.norm();
  return DensityMatrix(layout, g * g.adjoint());
}

Isometry random_isometry(const SpaceLayout& in, const SpaceLayout& out, std::uint64_t seed) {
  if (out.total_dim() < in.total_dim()) {
    throw Error(ErrorCode::kBadDim, "isometry needs out_dim >= in_dim");
  }
  CMatrix g = gaussian_matrix(out.total_dim(), in.total_dim(), seed);
  return Isometry(in, out, linalg::orthonormalize_columns(g));
}

}  // namespace qsblab
