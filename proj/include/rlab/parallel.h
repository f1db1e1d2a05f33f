// Copyright 2026 The Retrieval Lab Authors.
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
#ifndef RLAB_PARALLEL_H_
#define RLAB_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rlab {

// Process-wide worker cap; 1 disables threading. Defaults to 1.
int MaxThreads();
void SetMaxThreads(int threads);

// Calls fn(i) for i in [0, n), splitting the range into contiguous chunks.
// Each index is written by exactly one worker, so results stored per index
// are independent of the thread count. The first exception is rethrown.
template <typename Fn>
void ParallelFor(size_t n, Fn&& fn) {
  const size_t workers =
      std::min(n, static_cast<size_t>(std::max(1, MaxThreads())));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        const size_t end = std::min(n, (w + 1) * chunk);
        for (size_t i = w * chunk; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rlab

#endif  // RLAB_PARALLEL_H_
