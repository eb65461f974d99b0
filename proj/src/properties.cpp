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

#include "qsblab/properties.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace qsblab {

namespace {

struct Draw {
  explicit Draw(std::uint64_t seed) : rng(seed) {}

  std::size_t dim(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }
  DensityMatrix density(const SpaceLayout& layout) {
    const std::size_t rank = dim(1, layout.total_dim());
    return random_density(layout, rank, rng());
  }
  DensityMatrix full_rank(const SpaceLayout& layout) {
    return random_density(layout, layout.total_dim(), rng());
  }
  PureState pure(const SpaceLayout& layout) { return random_pure(layout, rng()); }

  std::mt19937_64 rng;
};

SpaceLayout single(std::size_t d) { return SpaceLayout{{"X", d}}; }

}  // namespace

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names{
      "triangle",          "triangle_pure",        "monotonicity",
      "purification",      "convexity_eigenvalue", "convexity_eigenvector",
      "fuchs_van_de_graaf", "symmetry"};
  return names;
}

BoundCheck run_property(const std::string& name, std::uint64_t instance_seed, std::size_t max_dim,
                        std::size_t* dim_out) {
  if (max_dim < 2) throw Error(ErrorCode::kBadConfig, "max_dim must be at least 2");
  Draw draw(instance_seed);
  std::size_t d = 0;
  BoundCheck check;
  if (name == "triangle") {
    d = draw.dim(2, max_dim);
    const auto rho = draw.density(single(d));
    const auto omega = draw.density(single(d));
    const auto sigma = draw.density(single(d));
    check = check_triangle(rho, omega, sigma);
  } else if (name == "triangle_pure") {
    d = draw.dim(2, max_dim);
    const auto rho = draw.density(single(d));
    const auto sigma = draw.density(single(d));
    check = check_triangle_pure(rho, sigma, draw.pure(single(d)));
  } else if (name == "monotonicity") {
    const std::size_t da = draw.dim(2, std::max<std::size_t>(2, max_dim / 2));
    const std::size_t db = draw.dim(1, std::max<std::size_t>(1, max_dim / da));
    d = da * db;
    const SpaceLayout ab{{"A", da}, {"B", db}};
    check = check_monotonicity(draw.density(ab), draw.density(ab), {"A"});
  } else if (name == "purification") {
    d = draw.dim(2, std::max<std::size_t>(2, max_dim / 2));
    const auto rho = draw.full_rank(single(d));
    const auto sigma = draw.density(single(d));
    check = check_purification_bound(rho, sigma, purify(rho, "R"));
  } else if (name == "convexity_eigenvalue" || name == "convexity_eigenvector") {
    d = draw.dim(2, max_dim);
    const auto rho = draw.density(single(d));
    const auto report = max_eig_convexity(rho, draw.pure(single(d)));
    check = name == "convexity_eigenvalue" ? report.top_eigenvalue : report.best_eigenvector;
  } else if (name == "fuchs_van_de_graaf") {
    d = draw.dim(2, max_dim);
    check = check_fuchs_van_de_graaf(draw.density(single(d)), draw.density(single(d)));
  } else if (name == "symmetry") {
    d = draw.dim(2, max_dim);
    const auto rho = draw.density(single(d));
    const auto sigma = draw.density(single(d));
    const double f1 = fidelity(rho, sigma);
    const double f2 = fidelity(sigma, rho);
    // Two-sided: slack is the distance to the 1e-10 agreement band.
    check = BoundCheck::make("symmetry", 1e-10, std::abs(f1 - f2), 0.0);
  } else {
    throw Error(ErrorCode::kBadConfig, "unknown property '" + name + "'");
  }
  if (dim_out != nullptr) *dim_out = d;
  return check;
}

PropertyReport run_property_suite(const PropertyOptions& options) {
  PropertyReport report;
  std::mt19937_64 seeder(options.seed);
  for (const auto& name : property_names()) {
    PropertyTally tally{name, 0, 0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < options.samples; ++i) {
      const std::uint64_t instance_seed = seeder();
      std::size_t dim = 0;
      const BoundCheck check = run_property(name, instance_seed, options.max_dim, &dim);
      ++tally.count;
      tally.min_slack = std::min(tally.min_slack, check.slack);
      if (!check.satisfied) {
        ++tally.violations;
        report.violations.push_back({name, check, instance_seed, dim});
      }
      if (options.keep_records) report.records.push_back({name, check, instance_seed, dim});
    }
    report.tallies.push_back(tally);
  }
  return report;
}

}  // namespace qsblab
