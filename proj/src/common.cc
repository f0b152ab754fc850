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

#include "xgx/status.h"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "xgx/fingerprint.h"
#include "xgx/matrix.h"

namespace xgx {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kBadValue: return "BadValue";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUnknownLevel: return "UnknownLevel";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kSingleClassData: return "SingleClassData";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
    case ErrorCode::kMixedBaselines: return "MixedBaselines";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

void Matrix::AppendRow(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row width " + std::to_string(values.size()) +
                    " != " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::SelectRows(std::span<const size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

namespace {
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;
}  // namespace

Fingerprint& Fingerprint::Add(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= kFnvPrime;
  }
  // Length terminator so ("ab","c") and ("a","bc") differ.
  return Add(static_cast<uint64_t>(bytes.size()));
}

Fingerprint& Fingerprint::Add(std::span<const double> values) {
  for (double v : values) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    Add(bits);
  }
  return *this;
}

Fingerprint& Fingerprint::Add(uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    state_ ^= (value >> (8 * i)) & 0xff;
    state_ *= kFnvPrime;
  }
  return *this;
}

std::string Fingerprint::Hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = kDigits[(state_ >> (4 * i)) & 0xf];
  }
  return out;
}

uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace xgx
