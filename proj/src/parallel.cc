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


#include "rlab/parallel.h"

#include <atomic>

namespace rlab {
namespace {

std::atomic<int> g_max_threads{1};

}  // namespace

int MaxThreads() { return g_max_threads.load(std::memory_order_relaxed); }

void SetMaxThreads(int threads) {
  g_max_threads.store(std::max(1, threads), std::memory_order_relaxed);
}

}  // namespace rlab
