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
// Portable deterministic randomness. Everything here is defined bit-exactly
// so that runs reproduce across compilers and standard libraries (the
// distributions in <random> are implementation-defined).

#ifndef RLAB_RNG_H_
#define RLAB_RNG_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rlab {

// SplitMix64 finalizer applied to seed + counter * golden gamma.
uint64_t CounterHash(uint64_t seed, uint64_t counter);

// 64-bit FNV-1a over the bytes of `text`.
uint64_t Fnv1a64(std::string_view text);
uint64_t Fnv1a64(std::span<const unsigned char> bytes, uint64_t state);

// Mixes several values into a single seed (used to derive per-epoch and
// per-purpose streams from one run seed).
uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b = 0);

// Sequential generator over CounterHash.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {}

  uint64_t Next() { return CounterHash(seed_, counter_++); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();

  // Uniform integer in [0, n). Unbiased (rejection sampling). n > 0.
  uint64_t Index(uint64_t n);

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace rlab

#endif  // RLAB_RNG_H_
