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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsblab {

// Numerical tolerances shared by every module. All sit at roughly 100x the
// double-precision accumulation error for dimensions up to 64.
inline constexpr double kNormTol = 1e-9;
inline constexpr double kHermTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kIsoTol = 1e-9;
inline constexpr double kNumTol = 1e-9;

// Eigenvalues below this are treated as exact zeros (rank, square roots).
inline constexpr double kRankCutoff = 1e-12;

enum class ErrorCode {
  kLabelClash,
  kLabelUnknown,
  kEmptyKeep,
  kBadPermutation,
  kLayoutMismatch,
  kBadRank,
  kBadLayout,
  kNotNormalized,
  kNotHermitian,
  kNotPsd,
  kNotIsometry,
  kNotTracePreserving,
  kNotCompletelyPositive,
  kBadEnvLabels,
  kBadPurification,
  kNoPerfectQsb,
  kEmptyInput,
  kBoundVacuous,
  kDegenerateResidual,
  kBadAmplitudes,
  kBadEpsilon,
  kChainNotApplicable,
  kBadDim,
  kTooLarge,
  kBadConfig,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qsblab
