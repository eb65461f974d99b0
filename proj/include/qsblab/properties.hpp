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

// Randomized sweep of the fidelity inequalities: triangle (mixed and pure
// forms), monotonicity under partial trace, the purification bound, the two
// convexity bounds and the Fuchs-van de Graaf sandwich.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qsblab/metrics.hpp"

namespace qsblab {

struct PropertyOptions {
  std::size_t samples = 10000;  // per property
  std::uint64_t seed = 42;
  std::size_t max_dim = 16;
  bool keep_records = false;  // retain every check, not only violations
};

struct PropertyRecord {
  std::string property;
  BoundCheck check;
  std::uint64_t seed = 0;  // instance seed; regenerates the failing input
  std::size_t dim = 0;
};

struct PropertyTally {
  std::string name;
  std::size_t count = 0;
  std::size_t violations = 0;
  double min_slack = 0.0;
};

struct PropertyReport {
  std::vector<PropertyTally> tallies;
  std::vector<PropertyRecord> violations;
  std::vector<PropertyRecord> records;
  bool ok() const { return violations.empty(); }
};

/// Property names, in report order.
const std::vector<std::string>& property_names();

/// Evaluates one property on the instance derived from `instance_seed`.
/// Throws Error(kBadConfig) for an unknown name or max_dim < 2.
BoundCheck run_property(const std::string& name, std::uint64_t instance_seed, std::size_t max_dim,
                        std::size_t* dim_out = nullptr);

PropertyReport run_property_suite(const PropertyOptions& options);

}  // namespace qsblab
