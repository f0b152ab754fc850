/*
 * Copyright 2026 The xgx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XGX_STATUS_H_
#define XGX_STATUS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace xgx {

// Failure categories surfaced by the library. The CLI maps these onto exit
// codes, so new codes need an entry in ExitCodeFor() in tools/xgx_main.cc.
enum class ErrorCode {
  kMissingColumn,
  kBadValue,
  kEmptyFile,
  kEmptyInput,
  kUnknownLevel,
  kIo,
  kSingleClassData,
  kNonConvergence,
  kDimensionMismatch,
  kTooManyFeatures,
  kMixedBaselines,
  kEmptyGroup,
  kUnknownFeature,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace xgx

#endif  // XGX_STATUS_H_
