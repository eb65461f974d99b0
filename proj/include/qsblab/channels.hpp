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

// Completely positive trace-preserving maps in Kraus, Choi and Stinespring
// form.

#pragma once

#include <string>
#include <vector>

#include "qsblab/hilbert.hpp"
#include "qsblab/metrics.hpp"

namespace qsblab {

class KrausChannel {
 public:
  /// Checked constructor: shapes must match the layouts, the family must be
  /// nonempty with at most in_dim * out_dim members, and sum K^dagger K must
  /// equal the identity within kIsoTol (NotTracePreserving otherwise).
  KrausChannel(SpaceLayout input_layout, SpaceLayout output_layout, std::vector<CMatrix> kraus_ops);

  /// Skips the completeness check so that defective families can be fed to
  /// validate_cpt. Shapes are still checked.
  static KrausChannel unchecked(SpaceLayout input_layout, SpaceLayout output_layout,
                                std::vector<CMatrix> kraus_ops);

  static KrausChannel identity(const SpaceLayout& layout);
  /// rho -> Tr(rho) * I / d on the same layout.
  static KrausChannel completely_depolarizing(const SpaceLayout& layout);

  const SpaceLayout& input_layout() const { return input_layout_; }
  const SpaceLayout& output_layout() const { return output_layout_; }
  const std::vector<CMatrix>& kraus_ops() const { return kraus_ops_; }

  /// Sum K rho K^dagger on a raw operator (no state invariants imposed).
  CMatrix apply_matrix(const CMatrix& rho) const;

 private:
  struct UncheckedTag {};
  KrausChannel(SpaceLayout in, SpaceLayout out, std::vector<CMatrix> ops, UncheckedTag);

  SpaceLayout input_layout_;
  SpaceLayout output_layout_;
  std::vector<CMatrix> kraus_ops_;
};

/// Choi matrix sum_ij C(|i><j|) (x) |i><j| with the output as the leading
/// factor and no 1/d normalization, so Tr_out(Choi) = identity on the input
/// for trace-preserving maps.
struct ChoiMatrix {
  SpaceLayout input_layout;
  SpaceLayout output_layout;
  CMatrix matrix;  // side out_dim * in_dim
};

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);

/// Kraus operators (1 (x) <e|) V over the environment basis. Environment
/// labels may sit anywhere in v's output layout.
KrausChannel from_stinespring(const Isometry& v, const std::vector<std::string>& env_labels);
/// V = sum_k K_k (x) |k>_E with a fresh environment label appended last.
Isometry to_stinespring(const KrausChannel& channel);
/// The environment label used by to_stinespring for `channel`.
std::string stinespring_env_label(const KrausChannel& channel);

ChoiMatrix to_choi(const KrausChannel& channel);
/// Kraus family from the Choi eigendecomposition (eigenvalues below
/// kRankCutoff dropped). Throws NotCompletelyPositive on eigenvalues below
/// -kPsdTol.
KrausChannel from_choi(const ChoiMatrix& choi);

/// lhs = 0, rhs = completeness residual ||sum K^dagger K - I|| (spectral),
/// so slack = -residual. Also fails if the Choi matrix is not PSD.
BoundCheck validate_cpt(const KrausChannel& channel);
/// Same for a Choi matrix: residual is max(||Tr_out J - I||, -min eig(J)).
BoundCheck validate_cpt(const ChoiMatrix& choi);

/// rho -> Tr(rho) * I / d_out from `in` to `out`.
KrausChannel replacement_channel(const SpaceLayout& in, const SpaceLayout& out);
/// (1 - p) a + p b, assembled through the Choi matrix so the Kraus family
/// stays minimal. Throws LayoutMismatch on differing layouts and BadConfig
/// unless p lies in [0, 1].
KrausChannel mix_channels(const KrausChannel& a, const KrausChannel& b, double p);

}  // namespace qsblab
