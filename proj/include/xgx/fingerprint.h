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

#ifndef XGX_FINGERPRINT_H_
#define XGX_FINGERPRINT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace xgx {

// 64-bit FNV-1a, used for content fingerprints and the match-level split.
class Fingerprint {
 public:
  Fingerprint& Add(std::string_view bytes);
  Fingerprint& Add(std::span<const double> values);
  Fingerprint& Add(uint64_t value);

  uint64_t value() const { return state_; }
  // 16 lowercase hex digits.
  std::string Hex() const;

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

uint64_t HashString(std::string_view s);

}  // namespace xgx

#endif  // XGX_FINGERPRINT_H_
