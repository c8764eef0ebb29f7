//
// Copyright 2026 The dpsco Authors
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
//

#include "dpsco/error.h"

namespace dpsco {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kPrecondition:
      return "precondition-violation";
    case ErrorCode::kNoPrivacy:
      return "no-privacy";
    case ErrorCode::kTruncation:
      return "truncation-violation";
    case ErrorCode::kCalibration:
      return "calibration";
    case ErrorCode::kConfiguration:
      return "configuration";
    case ErrorCode::kNonConvergence:
      return "non-convergence";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      detail_(message) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

void Rethrow(const Error& e, const std::string& context) {
  throw Error(e.code(), context + ": " + e.detail());
}

}  // namespace dpsco
