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

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsblab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitImpossible = 2,
  kExitIo = 3,
  kExitInvariant = 4,
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a d_A literal for the threshold command: decimal digits with an
/// optional integer exponent ("1e21"). Returns false on anything else,
/// including values below 1.
bool parse_integer_literal(const std::string& text, double& value);

/// Shortest decimal string that round-trips to `x`, in scientific notation.
std::string shortest_scientific(double x);

}  // namespace qsblab::cli
