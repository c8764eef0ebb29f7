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

#ifndef DPSCO_ERROR_H_
#define DPSCO_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpsco {

enum class ErrorCode {
  kInvalidInput,
  kPrecondition,
  // A Gaussian mechanism with zero noise and positive sensitivity.
  kNoPrivacy,
  // The tCDP truncation order is too small for the requested conversion.
  kTruncation,
  // The accountant pipeline overshoots the requested epsilon.
  kCalibration,
  kConfiguration,
  kNonConvergence,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  // The message without the code-name prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

// Rethrows `e` with `context` prepended to its detail, keeping the code.
[[noreturn]] void Rethrow(const Error& e, const std::string& context);

// Throws kInvalidInput with `message` unless `condition` holds.
inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCode::kInvalidInput, message);
}

}  // namespace dpsco

#endif  // DPSCO_ERROR_H_
