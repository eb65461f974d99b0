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

#include "qsblab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qsblab {

namespace {

void check_shapes(const SpaceLayout& in, const SpaceLayout& out, const std::vector<CMatrix>& ops) {
  if (ops.empty()) throw Error(ErrorCode::kBadDim, "Kraus family is empty");
  const auto rows = static_cast<Eigen::Index>(out.total_dim());
  const auto cols = static_cast<Eigen::Index>(in.total_dim());
  if (ops.size() > in.total_dim() * out.total_dim()) {
    throw Error(ErrorCode::kBadDim, "more Kraus operators than in_dim * out_dim");
  }
  for (const auto& k : ops) {
    if (k.rows() != rows || k.cols() != cols) {
      throw Error(ErrorCode::kLayoutMismatch, "Kraus operator shape does not match layouts");
    }
  }
}

CMatrix completeness(const std::vector<CMatrix>& ops, Eigen::Index in_dim) {
  CMatrix sum = CMatrix::Zero(in_dim, in_dim);
  for (const auto& k : ops) sum += k.adjoint() * k;
  return sum;
}

}  // namespace

KrausChannel::KrausChannel(SpaceLayout in, SpaceLayout out, std::vector<CMatrix> ops, UncheckedTag)
    : input_layout_(std::move(in)), output_layout_(std::move(out)), kraus_ops_(std::move(ops)) {
  check_shapes(input_layout_, output_layout_, kraus_ops_);
}

KrausChannel::KrausChannel(SpaceLayout input_layout, SpaceLayout output_layout,
                           std::vector<CMatrix> kraus_ops)
    : KrausChannel(std::move(input_layout), std::move(output_layout), std::move(kraus_ops),
                   UncheckedTag{}) {
  const auto n = static_cast<Eigen::Index>(input_layout_.total_dim());
  const double residual =
      (completeness(kraus_ops_, n) - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (residual > kIsoTol) {
    throw Error(ErrorCode::kNotTracePreserving,
                "max |sum K^dagger K - I| = " + std::to_string(residual));
  }
}

KrausChannel KrausChannel::unchecked(SpaceLayout input_layout, SpaceLayout output_layout,
                                     std::vector<CMatrix> kraus_ops) {
  return KrausChannel(std::move(input_layout), std::move(output_layout), std::move(kraus_ops),
                      UncheckedTag{});
}

KrausChannel KrausChannel::identity(const SpaceLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  return KrausChannel(layout, layout, {CMatrix::Identity(n, n)});
}

KrausChannel KrausChannel::completely_depolarizing(const SpaceLayout& layout) {
  // K_ij = |i><j| / sqrt(d)
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  std::vector<CMatrix> ops;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      CMatrix k = CMatrix::Zero(n, n);
      k(i, j) = scale;
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(layout, layout, std::move(ops));
}

CMatrix KrausChannel::apply_matrix(const CMatrix& rho) const {
  const auto n = static_cast<Eigen::Index>(output_layout_.total_dim());
  CMatrix out = CMatrix::Zero(n, n);
  for (const auto& k : kraus_ops_) out.noalias() += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
  if (!(rho.layout() == channel.input_layout())) {
    throw Error(ErrorCode::kLayoutMismatch, "state layout " + rho.layout().to_string() +
                                                " vs channel input " +
                                                channel.input_layout().to_string());
  }
  return DensityMatrix(channel.output_layout(), channel.apply_matrix(rho.matrix()));
}

KrausChannel from_stinespring(const Isometry& v, const std::vector<std::string>& env_labels) {
  const SpaceLayout& full = v.output_layout();
  for (const auto& label : env_labels) {
    if (!full.contains(label)) {
      throw Error(ErrorCode::kBadEnvLabels, "environment label '" + label + "' not in output");
    }
  }
  if (std::set<std::string>(env_labels.begin(), env_labels.end()).size() != env_labels.size()) {
    throw Error(ErrorCode::kBadEnvLabels, "repeated environment label");
  }
  std::vector<std::size_t> order;
  std::vector<Subsystem> system_subs;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto& s = full.subsystems()[i];
    if (std::find(env_labels.begin(), env_labels.end(), s.label) == env_labels.end()) {
      order.push_back(i);
      system_subs.push_back(s);
    }
  }
  if (system_subs.empty()) throw Error(ErrorCode::kBadEnvLabels, "no system output left");
  std::size_t env_dim = 1;
  for (const auto& label : env_labels) {
    order.push_back(full.index_of(label));
    env_dim *= full.dim_of(label);
  }
  const auto dims = full.dims();
  const auto map = linalg::permutation_indices(dims, order);

  const SpaceLayout out_layout(std::move(system_subs));
  const auto out_dim = static_cast<Eigen::Index>(out_layout.total_dim());
  const auto in_dim = static_cast<Eigen::Index>(v.input_layout().total_dim());
  const auto e_dim = static_cast<Eigen::Index>(env_dim);
  std::vector<CMatrix> ops;
  ops.reserve(env_dim);
  for (Eigen::Index e = 0; e < e_dim; ++e) {
    CMatrix k(out_dim, in_dim);
    for (Eigen::Index o = 0; o < out_dim; ++o) {
      k.row(o) = v.matrix().row(static_cast<Eigen::Index>(map[o * e_dim + e]));
    }
    ops.push_back(std::move(k));
  }
  return KrausChannel(v.input_layout(), out_layout, std::move(ops));
}

std::string stinespring_env_label(const KrausChannel& channel) {
  std::string label = "E";
  for (int suffix = 1; channel.output_layout().contains(label) ||
                       channel.input_layout().contains(label);
       ++suffix) {
    label = "E" + std::to_string(suffix);
  }
  return label;
}

Isometry to_stinespring(const KrausChannel& channel) {
  const auto& ops = channel.kraus_ops();
  const auto out_dim = static_cast<Eigen::Index>(channel.output_layout().total_dim());
  const auto in_dim = static_cast<Eigen::Index>(channel.input_layout().total_dim());
  const auto e_dim = static_cast<Eigen::Index>(ops.size());
  CMatrix v(out_dim * e_dim, in_dim);
  for (Eigen::Index o = 0; o < out_dim; ++o) {
    for (Eigen::Index e = 0; e < e_dim; ++e) v.row(o * e_dim + e) = ops[e].row(o);
  }
  SpaceLayout out = channel.output_layout().concat(
      SpaceLayout{{stinespring_env_label(channel), ops.size()}});
  return Isometry(channel.input_layout(), std::move(out), std::move(v));
}

ChoiMatrix to_choi(const KrausChannel& channel) {
  const auto out_dim = static_cast<Eigen::Index>(channel.output_layout().total_dim());
  const auto in_dim = static_cast<Eigen::Index>(channel.input_layout().total_dim());
  const Eigen::Index n = out_dim * in_dim;
  CMatrix j = CMatrix::Zero(n, n);
  for (const auto& k : channel.kraus_ops()) {
    // vec(K) with (output, input) row-major ordering.
    CVector vk(n);
    for (Eigen::Index o = 0; o < out_dim; ++o) {
      for (Eigen::Index i = 0; i < in_dim; ++i) vk[o * in_dim + i] = k(o, i);
    }
    j.noalias() += vk * vk.adjoint();
  }
  return ChoiMatrix{channel.input_layout(), channel.output_layout(), std::move(j)};
}

KrausChannel from_choi(const ChoiMatrix& choi) {
  const auto out_dim = static_cast<Eigen::Index>(choi.output_layout.total_dim());
  const auto in_dim = static_cast<Eigen::Index>(choi.input_layout.total_dim());
  const auto eig = linalg::hermitian_eigen(choi.matrix);
  if (eig.values[eig.values.size() - 1] < -kPsdTol) {
    throw Error(ErrorCode::kNotCompletelyPositive,
                "Choi matrix eigenvalue " + std::to_string(eig.values[eig.values.size() - 1]));
  }
  std::vector<CMatrix> ops;
  for (Eigen::Index m = 0; m < eig.values.size() && eig.values[m] > kRankCutoff; ++m) {
    const double w = std::sqrt(eig.values[m]);
    CMatrix k(out_dim, in_dim);
    for (Eigen::Index o = 0; o < out_dim; ++o) {
      for (Eigen::Index i = 0; i < in_dim; ++i) k(o, i) = w * eig.vectors(o * in_dim + i, m);
    }
    ops.push_back(std::move(k));
  }
  return KrausChannel(choi.input_layout, choi.output_layout, std::move(ops));
}

BoundCheck validate_cpt(const ChoiMatrix& choi) {
  const auto in_dim = static_cast<Eigen::Index>(choi.input_layout.total_dim());
  const std::size_t dims[] = {choi.output_layout.total_dim(), choi.input_layout.total_dim()};
  const CMatrix reduced = linalg::partial_trace(choi.matrix, dims, {false, true});
  const double tp_residual =
      linalg::spectral_norm(reduced - CMatrix::Identity(in_dim, in_dim));
  const auto eig = linalg::hermitian_eigen(choi.matrix);
  const double cp_residual = std::max(0.0, -eig.values[eig.values.size() - 1]);
  return BoundCheck::make("cpt", 0.0, std::max(tp_residual, cp_residual));
}

BoundCheck validate_cpt(const KrausChannel& channel) { return validate_cpt(to_choi(channel)); }

KrausChannel replacement_channel(const SpaceLayout& in, const SpaceLayout& out) {
  const auto din = static_cast<Eigen::Index>(in.total_dim());
  const auto dout = static_cast<Eigen::Index>(out.total_dim());
  const double w = 1.0 / std::sqrt(static_cast<double>(dout));
  std::vector<CMatrix> ops;
  for (Eigen::Index o = 0; o < dout; ++o) {
    for (Eigen::Index i = 0; i < din; ++i) {
      CMatrix k = CMatrix::Zero(dout, din);
      k(o, i) = w;
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(in, out, std::move(ops));
}

KrausChannel mix_channels(const KrausChannel& a, const KrausChannel& b, double p) {
  if (!(a.input_layout() == b.input_layout()) || !(a.output_layout() == b.output_layout())) {
    throw Error(ErrorCode::kLayoutMismatch, "mixed channels must share layouts");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kBadConfig, "mixing weight outside [0, 1]");
  ChoiMatrix j = to_choi(a);
  j.matrix = (1.0 - p) * j.matrix + p * to_choi(b).matrix;
  return from_choi(j);
}

}  // namespace qsblab
