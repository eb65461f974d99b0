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

// Labeled tensor-product Hilbert spaces: layouts, pure and mixed states,
// isometries, and the index gymnastics between them (tensor products,
// partial traces, purification, subsystem reordering).
//
// Convention: a layout [(A, dA), (B, dB)] is the space A (x) B with A as the
// most significant index, i.e. basis vector |a b> sits at flat index
// a * dB + b.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "qsblab/error.hpp"
#include "qsblab/linalg.hpp"

namespace qsblab {

struct Subsystem {
  std::string label;
  std::size_t dim;

  bool operator==(const Subsystem&) const = default;
};

class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<Subsystem> subsystems);
  SpaceLayout(std::initializer_list<Subsystem> subsystems)
      : SpaceLayout(std::vector<Subsystem>(subsystems)) {}

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  std::size_t total_dim() const { return total_dim_; }

  std::vector<std::string> labels() const;
  std::vector<std::size_t> dims() const;

  bool contains(const std::string& label) const;
  /// Position of `label`; throws LabelUnknown.
  std::size_t index_of(const std::string& label) const;
  std::size_t dim_of(const std::string& label) const;

  /// Concatenation; throws LabelClash on shared labels.
  SpaceLayout concat(const SpaceLayout& other) const;
  /// The sub-layout containing exactly `keep`, in this layout's order.
  SpaceLayout restrict_to(const std::vector<std::string>& keep) const;

  bool operator==(const SpaceLayout& other) const { return subsystems_ == other.subsystems_; }

  std::string to_string() const;

 private:
  std::vector<Subsystem> subsystems_;
  std::size_t total_dim_ = 1;
};

class PureState {
 public:
  /// Throws NotNormalized if |amplitudes| deviates from 1 by more than
  /// kNormTol and LayoutMismatch on a length mismatch.
  PureState(SpaceLayout layout, CVector amplitudes);

  /// Normalizes `amplitudes` first; throws NotNormalized on a zero vector.
  static PureState normalized(SpaceLayout layout, CVector amplitudes);
  static PureState basis(SpaceLayout layout, std::size_t index);

  const SpaceLayout& layout() const { return layout_; }
  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return layout_.total_dim(); }

  /// <this|other>
  Complex inner(const PureState& other) const;

 private:
  SpaceLayout layout_;
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity (kHermTol), unit trace (kNormTol) and positivity.
  /// Slightly negative eigenvalues (above -kPsdTol) are clipped to zero;
  /// anything more negative throws NotPsd.
  DensityMatrix(SpaceLayout layout, CMatrix matrix);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(SpaceLayout layout);

  const SpaceLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return layout_.total_dim(); }

 private:
  SpaceLayout layout_;
  CMatrix matrix_;
};

/// Linear map V with V^dagger V = 1 from input_layout to output_layout.
class Isometry {
 public:
  /// Throws NotIsometry if the defect exceeds kIsoTol or out_dim < in_dim.
  Isometry(SpaceLayout input_layout, SpaceLayout output_layout, CMatrix matrix);

  static Isometry identity(SpaceLayout layout);

  const SpaceLayout& input_layout() const { return input_layout_; }
  const SpaceLayout& output_layout() const { return output_layout_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  SpaceLayout input_layout_;
  SpaceLayout output_layout_;
  CMatrix matrix_;
};

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
/// Partial trace of an arbitrary square operator over `layout`; no state
/// invariants are imposed on input or output.
CMatrix partial_trace(const CMatrix& op, const SpaceLayout& layout,
                      const std::vector<std::string>& keep);

/// Purifies rho onto rho.layout() + (env_label, rank). The environment
/// dimension is the number of eigenvalues above kRankCutoff (at least 1).
PureState purify(const DensityMatrix& rho, const std::string& env_label);

PureState permute(const PureState& psi, const std::vector<std::string>& new_order);
DensityMatrix permute(const DensityMatrix& rho, const std::vector<std::string>& new_order);

PureState apply_isometry(const Isometry& v, const PureState& psi);
DensityMatrix apply_isometry(const Isometry& v, const DensityMatrix& rho);

/// Haar-random pure state (normalized complex Gaussian vector).
PureState random_pure(const SpaceLayout& layout, std::uint64_t seed);
/// Marginal of a Haar-random pure state on layout (x) C^rank.
DensityMatrix random_density(const SpaceLayout& layout, std::size_t rank, std::uint64_t seed);
/// Haar-random isometry: orthonormalized complex Gaussian matrix.
Isometry random_isometry(const SpaceLayout& in, const SpaceLayout& out, std::uint64_t seed);

/// Matrix of i.i.d. standard complex Gaussians, E|z|^2 = 2.
CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace qsblab
