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

// JSON and CSV serialization. Complex numbers are [re, im] pairs, matrices
// are row-major lists of rows, layouts are lists of [label, dim].

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsblab/channels.hpp"
#include "qsblab/optimize.hpp"
#include "qsblab/qsb.hpp"

namespace qsblab::io {

using Json = nlohmann::json;

Json to_json(const CMatrix& m);
Json to_json(const CVector& v);
Json to_json(const SpaceLayout& layout);
Json to_json(const PureState& psi);
Json to_json(const DensityMatrix& rho);
Json to_json(const Isometry& v);
Json to_json(const KrausChannel& channel);
Json to_json(const QsbInstance& instance);
Json to_json(const BoundCheck& check);
Json to_json(const EpsilonChainReport& report);
Json to_json(const FrontierPoint& point);

// Readers throw Error(kParse) on structural problems and let the domain
// constructors raise their own invariant errors.
CMatrix matrix_from_json(const Json& j);
CVector vector_from_json(const Json& j);
SpaceLayout layout_from_json(const Json& j);
PureState state_from_json(const Json& j);
Isometry isometry_from_json(const Json& j);
KrausChannel channel_from_json(const Json& j);
QsbInstance instance_from_json(const Json& j);

/// stage,lhs,rhs,slack,satisfied,applicable,vacuous
std::string chain_report_csv(const EpsilonChainReport& report);
/// d_S,d_A,d_B,d_C,best_fidelity,restarts,seed
std::string frontier_csv(const std::vector<FrontierPoint>& points);

/// Throws Error(kIo) when the file cannot be read, Error(kParse) on bad JSON.
Json read_json(const std::filesystem::path& path);
/// Throws Error(kIo) on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qsblab::io
