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

#include "qsblab/error.hpp"

namespace qsblab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLabelClash: return "LabelClash";
    case ErrorCode::kLabelUnknown: return "LabelUnknown";
    case ErrorCode::kEmptyKeep: return "EmptyKeep";
    case ErrorCode::kBadPermutation: return "BadPermutation";
    case ErrorCode::kLayoutMismatch: return "LayoutMismatch";
    case ErrorCode::kBadRank: return "BadRank";
    case ErrorCode::kBadLayout: return "BadLayout";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotPsd: return "NotPsd";
    case ErrorCode::kNotIsometry: return "NotIsometry";
    case ErrorCode::kNotTracePreserving: return "NotTracePreserving";
    case ErrorCode::kNotCompletelyPositive: return "NotCompletelyPositive";
    case ErrorCode::kBadEnvLabels: return "BadEnvLabels";
    case ErrorCode::kBadPurification: return "BadPurification";
    case ErrorCode::kNoPerfectQsb: return "NoPerfectQsb";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kBoundVacuous: return "BoundVacuous";
    case ErrorCode::kDegenerateResidual: return "DegenerateResidual";
    case ErrorCode::kBadAmplitudes: return "BadAmplitudes";
    case ErrorCode::kBadEpsilon: return "BadEpsilon";
    case ErrorCode::kChainNotApplicable: return "ChainNotApplicable";
    case ErrorCode::kBadDim: return "BadDim";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace qsblab
