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

#include "xgx/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xgx {
namespace {

int ThreadsFromEnv() {
  if (const char* env = std::getenv("XGX_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::atomic<int>& ThreadSetting() {
  static std::atomic<int> threads{ThreadsFromEnv()};
  return threads;
}

}  // namespace

int DefaultThreads() { return ThreadSetting().load(); }

void SetDefaultThreads(int threads) {
  ThreadSetting().store(std::max(1, threads));
}

void ParallelFor(size_t n, const std::function<void(size_t)>& body,
                 int threads) {
  if (threads <= 0) threads = DefaultThreads();
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(std::max(1, threads)), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    const size_t begin = n * w / workers;
    const size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace xgx
