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

// Variational search for shared-broadcasting instances. The channel is held
// as a Stinespring isometry U: S -> A B C E and the two representations as
// free isometries; all three are moved by Riemannian gradient ascent on the
// Stiefel manifold with a QR retraction.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qsblab/qsb.hpp"

namespace qsblab {

enum class Objective { kWorstCase, kAverage };

struct SampleSpec {
  std::size_t haar_count = 200;
  std::uint64_t seed = 42;
};

struct OptimizeConfig {
  QsbDims dims;
  /// 0 selects min(d_S d_A d_B d_C, 16).
  std::size_t env_dim = 0;
  std::size_t restarts = 16;
  std::size_t max_iters = 2000;
  double step_init = 1.0;
  Objective objective = Objective::kWorstCase;
  SampleSpec samples;
  std::uint64_t seed = 42;
  double temperature_start = 10.0;
  double temperature_end = 1000.0;
  /// 0 means one thread per hardware core, further capped by QSBLAB_THREADS.
  std::size_t threads = 0;
};

/// Throws BadConfig for non-positive counts or step, TooLarge when
/// d_A d_B d_C env exceeds kMaxTotalDim, BadDim when env exceeds
/// d_S d_A d_B d_C or a dimension is zero.
void validate(const OptimizeConfig& config);
std::size_t effective_env_dim(const OptimizeConfig& config);

inline constexpr std::size_t kMaxTotalDim = 4096;

/// Raw optimization variables.
struct Parameters {
  CMatrix u;     // (d_A d_B d_C d_E) x d_S
  CMatrix v_ab;  // (d_A d_B) x d_S
  CMatrix v_ac;  // (d_A d_C) x d_S
};

/// Everything the objective needs that does not change across iterations.
class ObjectiveContext {
 public:
  ObjectiveContext(const QsbDims& dims, std::size_t env_dim, std::span<const PureState> samples);

  const QsbDims& dims() const { return dims_; }
  std::size_t env_dim() const { return env_dim_; }
  std::size_t sample_count() const { return static_cast<std::size_t>(samples_.cols()); }

  /// Per-sample (F_AB, F_AC) interleaved: entry 2j is F_AB of sample j.
  std::vector<double> fidelities(const Parameters& p) const;

  struct Evaluation {
    double value = 0.0;
    double hard_min = 0.0;
    CMatrix grad_u;  // Euclidean gradients, real inner product Re Tr(X^dagger Y)
    CMatrix grad_ab;
    CMatrix grad_ac;
  };
  /// Soft-min -(1/T) log sum exp(-T f) of all fidelities for kWorstCase,
  /// their mean for kAverage.
  double value(const Parameters& p, Objective objective, double temperature) const;
  Evaluation evaluate(const Parameters& p, Objective objective, double temperature) const;

 private:
  QsbDims dims_;
  std::size_t env_dim_;
  CMatrix samples_;                 // d_S x N
  std::vector<Eigen::Index> to_acbe_;  // flat index in (A,C,B,E) order -> (A,B,C,E) order
};

Parameters random_parameters(const QsbDims& dims, std::size_t env_dim, std::uint64_t seed);
QsbInstance to_instance(const QsbDims& dims, const Parameters& p);

/// Tangent projection of `euclidean_gradient` at `v` followed by the QR
/// retraction of v + step * xi.
CMatrix riemannian_step(const CMatrix& v, const CMatrix& euclidean_gradient, double step);
Isometry riemannian_step(const Isometry& v, const CMatrix& euclidean_gradient, double step);

struct AscentStep {
  Parameters params;
  double value = 0.0;
  double step = 0.0;  // accepted step, 0 when the search failed
  double slope = 0.0;  // squared norm of the Riemannian gradient
};
/// One Armijo backtracking step (factor 0.5, c = 1e-4) starting at `step`.
AscentStep ascent_step(const ObjectiveContext& ctx, const Parameters& p, Objective objective,
                       double temperature, double step);

struct FrontierPoint {
  QsbDims dims;
  double best_worst_fidelity = 0.0;
  QsbInstance best_instance;
  std::size_t iterations = 0;
  std::size_t restart = 0;  // index of the winning start
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  std::size_t env_dim = 0;
  Parameters best_parameters;
  /// 1 - measure_eps of best_instance on the optimizer's sample set.
  double verified_fidelity = 0.0;
};

FrontierPoint optimize_qsb(const OptimizeConfig& config);
/// As above with extra starting points tried after the random restarts;
/// their restart indices continue after config.restarts.
FrontierPoint optimize_qsb(const OptimizeConfig& config, std::span<const Parameters> warm_starts);

/// Zero-pads every output subsystem and the environment from (`from`,
/// `from_env`) to (`to`, `to_env`), preserving all fidelities. Throws BadDim
/// unless d_S agrees and no dimension shrinks.
Parameters embed_parameters(const QsbDims& from, std::size_t from_env, const Parameters& p,
                            const QsbDims& to, std::size_t to_env);

/// One point per d_A in [d_a_min, d_a_max]; each point is also warm-started
/// from the previous winner embedded into the larger A, which makes the
/// sequence non-decreasing.
std::vector<FrontierPoint> frontier_sweep(std::size_t d_s, std::size_t d_a_min,
                                          std::size_t d_a_max, std::size_t d_b, std::size_t d_c,
                                          const OptimizeConfig& config);

}  // namespace qsblab
