// Copyright 2026 The ldprepr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldprepr/error.hpp"

namespace ldprepr {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter:
      return "parameter error";
    case ErrorCode::kShape:
      return "shape error";
    case ErrorCode::kInvalidValue:
      return "invalid value";
    case ErrorCode::kDegenerateInput:
      return "degenerate input";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kDivergence:
      return "divergence";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "error";
}

}  // namespace ldprepr
