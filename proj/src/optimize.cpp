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

#include "qsblab/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>

namespace qsblab {

namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

constexpr double kArmijoC = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 10.0;

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

SpaceLayout stinespring_layout(const QsbDims& d, std::size_t env) {
  return SpaceLayout{{"A", d.a}, {"B", d.b}, {"C", d.c}, {"E", env}};
}

CMatrix tangent(const CMatrix& v, const CMatrix& g) {
  const CMatrix vg = v.adjoint() * g;
  return g - v * (0.5 * (vg + vg.adjoint()));
}

std::size_t thread_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("QSBLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && v > 0) n = std::min(n, static_cast<std::size_t>(v));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::size_t effective_env_dim(const OptimizeConfig& config) {
  if (config.env_dim != 0) return config.env_dim;
  const QsbDims& d = config.dims;
  return std::min<std::size_t>(d.s * d.a * d.b * d.c, 16);
}

void validate(const OptimizeConfig& config) {
  const QsbDims& d = config.dims;
  if (d.s == 0 || d.a == 0 || d.b == 0 || d.c == 0) {
    throw Error(ErrorCode::kBadDim, "dimensions must be positive");
  }
  if (d.s > d.a * d.b || d.s > d.a * d.c) {
    throw Error(ErrorCode::kBadDim, "d_S exceeds d_A*d_B or d_A*d_C");
  }
  if (config.restarts == 0 || config.max_iters == 0) {
    throw Error(ErrorCode::kBadConfig, "restarts and max_iters must be positive");
  }
  if (!(config.step_init > 0.0)) throw Error(ErrorCode::kBadConfig, "step_init must be positive");
  if (!(config.temperature_start > 0.0) || !(config.temperature_end > 0.0)) {
    throw Error(ErrorCode::kBadConfig, "temperatures must be positive");
  }
  const std::size_t env = effective_env_dim(config);
  if (env > d.s * d.a * d.b * d.c) {
    throw Error(ErrorCode::kBadDim, "env_dim " + std::to_string(env) + " exceeds d_S*d_A*d_B*d_C");
  }
  const std::size_t total = d.a * d.b * d.c * env;
  if (total > kMaxTotalDim) {
    throw Error(ErrorCode::kTooLarge, "total dimension " + std::to_string(total) +
                                          " exceeds " + std::to_string(kMaxTotalDim));
  }
}

// ---------------------------------------------------------------------------
// Objective

ObjectiveContext::ObjectiveContext(const QsbDims& dims, std::size_t env_dim,
                                   std::span<const PureState> samples)
    : dims_(dims), env_dim_(env_dim) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "objective needs samples");
  samples_.resize(idx(dims.s), idx(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (samples[j].dim() != dims.s) throw Error(ErrorCode::kLayoutMismatch, "sample not in S");
    samples_.col(idx(j)) = samples[j].amplitudes();
  }
  const std::size_t full[] = {dims.a, dims.b, dims.c, env_dim};
  const std::size_t order[] = {0, 2, 1, 3};
  const auto map = linalg::permutation_indices(full, order);
  to_acbe_.assign(map.begin(), map.end());
}

std::vector<double> ObjectiveContext::fidelities(const Parameters& p) const {
  const QsbDims& d = dims_;
  const CMatrix phi = p.u * samples_;
  const CMatrix ab = p.v_ab * samples_;
  const CMatrix ac = p.v_ac * samples_;
  const Eigen::Index n = samples_.cols();
  std::vector<double> f(2 * static_cast<std::size_t>(n));
  CVector permuted(phi.rows());
  for (Eigen::Index j = 0; j < n; ++j) {
    const RowMajorMap m_ab(phi.col(j).data(), idx(d.a * d.b), idx(d.c * env_dim_));
    f[2 * j] = (m_ab.adjoint() * ab.col(j)).squaredNorm();
    for (Eigen::Index k = 0; k < permuted.size(); ++k) permuted[k] = phi(to_acbe_[k], j);
    const RowMajorMap m_ac(permuted.data(), idx(d.a * d.c), idx(d.b * env_dim_));
    f[2 * j + 1] = (m_ac.adjoint() * ac.col(j)).squaredNorm();
  }
  return f;
}

namespace {

struct Weights {
  double value = 0.0;
  double hard_min = 0.0;
  std::vector<double> lambda;
};

Weights weigh(const std::vector<double>& f, Objective objective, double temperature) {
  Weights w;
  w.hard_min = *std::min_element(f.begin(), f.end());
  w.lambda.resize(f.size());
  if (objective == Objective::kAverage) {
    double sum = 0.0;
    for (double x : f) sum += x;
    w.value = sum / static_cast<double>(f.size());
    std::fill(w.lambda.begin(), w.lambda.end(), 1.0 / static_cast<double>(f.size()));
    return w;
  }
  double z = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    w.lambda[i] = std::exp(-temperature * (f[i] - w.hard_min));
    z += w.lambda[i];
  }
  for (double& l : w.lambda) l /= z;
  w.value = w.hard_min - std::log(z) / temperature;
  return w;
}

}  // namespace

double ObjectiveContext::value(const Parameters& p, Objective objective, double temperature) const {
  return weigh(fidelities(p), objective, temperature).value;
}

ObjectiveContext::Evaluation ObjectiveContext::evaluate(const Parameters& p, Objective objective,
                                                        double temperature) const {
  const QsbDims& d = dims_;
  const Eigen::Index rows_ab = idx(d.a * d.b);
  const Eigen::Index rows_ac = idx(d.a * d.c);
  const Eigen::Index cols_ab = idx(d.c * env_dim_);
  const Eigen::Index cols_ac = idx(d.b * env_dim_);

  const CMatrix phi = p.u * samples_;
  const CMatrix ab = p.v_ab * samples_;
  const CMatrix ac = p.v_ac * samples_;
  const Eigen::Index n = samples_.cols();

  std::vector<double> f(2 * static_cast<std::size_t>(n));
  std::vector<CVector> w_ab(n);
  std::vector<CVector> w_ac(n);
  CMatrix permuted(phi.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const RowMajorMap m_ab(phi.col(j).data(), rows_ab, cols_ab);
    w_ab[j] = m_ab.adjoint() * ab.col(j);
    f[2 * j] = w_ab[j].squaredNorm();
    for (Eigen::Index k = 0; k < permuted.rows(); ++k) permuted(k, j) = phi(to_acbe_[k], j);
    const RowMajorMap m_ac(permuted.col(j).data(), rows_ac, cols_ac);
    w_ac[j] = m_ac.adjoint() * ac.col(j);
    f[2 * j + 1] = w_ac[j].squaredNorm();
  }
  const Weights wts = weigh(f, objective, temperature);

  // d f / d phi^* = vec(a w^dagger) per route; d f / d a^* = Phi w.
  CMatrix g_phi = CMatrix::Zero(phi.rows(), n);
  CMatrix g_ab(rows_ab, n);
  CMatrix g_ac(rows_ac, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double l_ab = wts.lambda[2 * j];
    const double l_ac = wts.lambda[2 * j + 1];
    const RowMajorMap m_ab(phi.col(j).data(), rows_ab, cols_ab);
    const RowMajorMap m_ac(permuted.col(j).data(), rows_ac, cols_ac);
    g_ab.col(j) = l_ab * (m_ab * w_ab[j]);
    g_ac.col(j) = l_ac * (m_ac * w_ac[j]);
    for (Eigen::Index r = 0; r < rows_ab; ++r) {
      const Complex a = l_ab * ab(r, j);
      for (Eigen::Index s = 0; s < cols_ab; ++s) {
        g_phi(r * cols_ab + s, j) += a * std::conj(w_ab[j][s]);
      }
    }
    for (Eigen::Index r = 0; r < rows_ac; ++r) {
      const Complex c = l_ac * ac(r, j);
      for (Eigen::Index s = 0; s < cols_ac; ++s) {
        g_phi(to_acbe_[r * cols_ac + s], j) += c * std::conj(w_ac[j][s]);
      }
    }
  }
  Evaluation ev;
  ev.value = wts.value;
  ev.hard_min = wts.hard_min;
  const CMatrix psi_dag = samples_.adjoint();
  ev.grad_u = 2.0 * g_phi * psi_dag;
  ev.grad_ab = 2.0 * g_ab * psi_dag;
  ev.grad_ac = 2.0 * g_ac * psi_dag;
  return ev;
}

// ---------------------------------------------------------------------------
// Parameters

Parameters random_parameters(const QsbDims& dims, std::size_t env_dim, std::uint64_t seed) {
  std::mt19937_64 seeder(seed);
  const SpaceLayout s = dims.source();
  return Parameters{
      random_isometry(s, stinespring_layout(dims, env_dim), seeder()).matrix(),
      random_isometry(s, dims.ab(), seeder()).matrix(),
      random_isometry(s, dims.ac(), seeder()).matrix(),
  };
}

QsbInstance to_instance(const QsbDims& dims, const Parameters& p) {
  const auto env = static_cast<std::size_t>(p.u.rows()) / (dims.a * dims.b * dims.c);
  const Isometry u(dims.source(), stinespring_layout(dims, env), p.u);
  return QsbInstance(from_stinespring(u, {"E"}), Isometry(dims.source(), dims.ab(), p.v_ab),
                     Isometry(dims.source(), dims.ac(), p.v_ac));
}

Parameters embed_parameters(const QsbDims& from, std::size_t from_env, const Parameters& p,
                            const QsbDims& to, std::size_t to_env) {
  if (from.s != to.s || to.a < from.a || to.b < from.b || to.c < from.c || to_env < from_env) {
    throw Error(ErrorCode::kBadDim, "embedding target must not shrink any dimension");
  }
  const auto s = idx(from.s);
  Parameters out{CMatrix::Zero(idx(to.a * to.b * to.c * to_env), s),
                 CMatrix::Zero(idx(to.a * to.b), s), CMatrix::Zero(idx(to.a * to.c), s)};
  for (std::size_t a = 0; a < from.a; ++a) {
    for (std::size_t b = 0; b < from.b; ++b) {
      for (std::size_t c = 0; c < from.c; ++c) {
        for (std::size_t e = 0; e < from_env; ++e) {
          const std::size_t src = ((a * from.b + b) * from.c + c) * from_env + e;
          const std::size_t dst = ((a * to.b + b) * to.c + c) * to_env + e;
          out.u.row(idx(dst)) = p.u.row(idx(src));
        }
      }
      out.v_ab.row(idx(a * to.b + b)) = p.v_ab.row(idx(a * from.b + b));
    }
    for (std::size_t c = 0; c < from.c; ++c) {
      out.v_ac.row(idx(a * to.c + c)) = p.v_ac.row(idx(a * from.c + c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Steps

CMatrix riemannian_step(const CMatrix& v, const CMatrix& euclidean_gradient, double step) {
  return linalg::orthonormalize_columns(v + step * tangent(v, euclidean_gradient));
}

Isometry riemannian_step(const Isometry& v, const CMatrix& euclidean_gradient, double step) {
  return Isometry(v.input_layout(), v.output_layout(),
                  riemannian_step(v.matrix(), euclidean_gradient, step));
}

namespace {

AscentStep line_search(const ObjectiveContext& ctx, const Parameters& p,
                       const ObjectiveContext::Evaluation& ev, Objective objective,
                       double temperature, double step) {
  const CMatrix xi_u = tangent(p.u, ev.grad_u);
  const CMatrix xi_ab = tangent(p.v_ab, ev.grad_ab);
  const CMatrix xi_ac = tangent(p.v_ac, ev.grad_ac);
  AscentStep out{p, ev.value, 0.0, 0.0};
  out.slope = xi_u.squaredNorm() + xi_ab.squaredNorm() + xi_ac.squaredNorm();
  if (out.slope == 0.0) return out;
  for (double t = step; t >= kMinStep; t *= kBacktrack) {
    Parameters trial{linalg::orthonormalize_columns(p.u + t * xi_u),
                     linalg::orthonormalize_columns(p.v_ab + t * xi_ab),
                     linalg::orthonormalize_columns(p.v_ac + t * xi_ac)};
    const double v = ctx.value(trial, objective, temperature);
    if (v >= ev.value + kArmijoC * t * out.slope) {
      out.params = std::move(trial);
      out.value = v;
      out.step = t;
      return out;
    }
  }
  return out;
}

struct RunResult {
  double best = -1.0;
  Parameters params;
  std::size_t iterations = 0;
};

RunResult run_start(const ObjectiveContext& ctx, const OptimizeConfig& config, Parameters p) {
  RunResult r;
  r.params = p;
  const double t0 = config.temperature_start;
  const double t1 = config.temperature_end;
  const std::size_t iters = config.max_iters;
  double step = config.step_init;
  for (std::size_t it = 0; it < iters; ++it) {
    const double frac = iters > 1 ? static_cast<double>(it) / static_cast<double>(iters - 1) : 1.0;
    const double temperature = t0 * std::pow(t1 / t0, frac);
    const auto ev = ctx.evaluate(p, config.objective, temperature);
    r.iterations = it + 1;
    if (ev.hard_min > r.best) {
      r.best = ev.hard_min;
      r.params = p;
    }
    if (ev.hard_min >= 1.0 - 1e-13) break;
    AscentStep s = line_search(ctx, p, ev, config.objective, temperature, step);
    if (s.step == 0.0) {
      if (frac >= 1.0) break;
      step = config.step_init;
      continue;
    }
    p = std::move(s.params);
    step = std::min(2.0 * s.step, kMaxStep);
  }
  const double final_min = std::ranges::min(ctx.fidelities(p));
  if (final_min > r.best) {
    r.best = final_min;
    r.params = p;
  }
  return r;
}

}  // namespace

AscentStep ascent_step(const ObjectiveContext& ctx, const Parameters& p, Objective objective,
                       double temperature, double step) {
  return line_search(ctx, p, ctx.evaluate(p, objective, temperature), objective, temperature,
                     step);
}

// ---------------------------------------------------------------------------
// Driver

FrontierPoint optimize_qsb(const OptimizeConfig& config) { return optimize_qsb(config, {}); }

FrontierPoint optimize_qsb(const OptimizeConfig& config, std::span<const Parameters> warm_starts) {
  validate(config);
  const QsbDims& d = config.dims;
  const std::size_t env = effective_env_dim(config);
  const auto samples = standard_sample_states(d.s, config.samples.haar_count, config.samples.seed);
  const ObjectiveContext ctx(d, env, samples);

  const std::size_t jobs = config.restarts + warm_starts.size();
  std::vector<std::optional<RunResult>> results(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      Parameters start = k < config.restarts ? random_parameters(d, env, config.seed + k)
                                             : warm_starts[k - config.restarts];
      results[k] = run_start(ctx, config, std::move(start));
    }
  };
  const std::size_t n_threads = thread_count(config.threads, jobs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::size_t winner = 0;
  for (std::size_t k = 1; k < jobs; ++k) {
    if (results[k]->best > results[winner]->best) winner = k;
  }
  RunResult& best = *results[winner];
  QsbInstance instance = to_instance(d, best.params);
  const double verified = 1.0 - measure_eps(instance, samples).eps_hat;
  return FrontierPoint{d,
                       std::clamp(best.best, 0.0, 1.0),
                       std::move(instance),
                       best.iterations,
                       winner,
                       config.restarts,
                       config.seed,
                       env,
                       std::move(best.params),
                       verified};
}

std::vector<FrontierPoint> frontier_sweep(std::size_t d_s, std::size_t d_a_min,
                                          std::size_t d_a_max, std::size_t d_b, std::size_t d_c,
                                          const OptimizeConfig& config) {
  if (d_a_min == 0 || d_a_min > d_a_max) {
    throw Error(ErrorCode::kBadConfig, "d_A range must satisfy 1 <= min <= max");
  }
  std::vector<FrontierPoint> points;
  for (std::size_t d_a = d_a_min; d_a <= d_a_max; ++d_a) {
    OptimizeConfig cfg = config;
    cfg.dims = QsbDims{d_s, d_a, d_b, d_c};
    std::vector<Parameters> warm;
    if (!points.empty()) {
      const FrontierPoint& prev = points.back();
      warm.push_back(embed_parameters(prev.dims, prev.env_dim, prev.best_parameters, cfg.dims,
                                      std::max(prev.env_dim, effective_env_dim(cfg))));
      if (cfg.env_dim == 0) cfg.env_dim = std::max(prev.env_dim, effective_env_dim(cfg));
    }
    points.push_back(optimize_qsb(cfg, warm));
  }
  return points;
}

}  // namespace qsblab
