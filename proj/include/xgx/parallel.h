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

#ifndef XGX_PARALLEL_H_
#define XGX_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace xgx {

// Worker count used by ParallelFor. Initialized from XGX_THREADS when set,
// otherwise 1.
int DefaultThreads();
void SetDefaultThreads(int threads);

// Runs body(i) for i in [0, n). Work is split into contiguous chunks across
// at most `threads` workers (DefaultThreads() when threads <= 0). The body
// must only write state owned by index i; results then do not depend on the
// worker count.
void ParallelFor(size_t n, const std::function<void(size_t)>& body,
                 int threads = 0);

}  // namespace xgx

#endif  // XGX_PARALLEL_H_
