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

#include <optional>

#include "qsblab/error.hpp"

namespace testutil {

/// Error code raised by `f`, or nullopt when it returns normally.
template <class F>
std::optional<qsblab::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const qsblab::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testutil

#define CHECK_ERROR(expr, code) \
  CHECK(testutil::error_code([&] { (void)(expr); }) == std::optional<qsblab::ErrorCode>(code))
