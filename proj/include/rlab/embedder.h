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

// Dual encoder with separate question and passage towers. Each tower maps a
// token sequence to a vector by
//
//   m = mean_t E[hash(t) mod B]      (hashed bag of words)
//   v = tanh(W m + b)
//
// Gradients are computed analytically; see BackpropBatch().

#ifndef RLAB_EMBEDDER_H_
#define RLAB_EMBEDDER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rlab/core.h"

namespace rlab {

using Vec = std::vector<double>;

struct EncoderConfig {
  int hash_buckets = 1 << 16;
  int dim = 64;
  uint64_t rng_seed = 0;

  void Validate() const;
};

enum class Side { kQuestion, kPassage };

// Parameters of one tower. Matrices are dense row-major.
struct Tower {
  int buckets = 0;
  int dim = 0;
  std::vector<double> embeddings;  // buckets x dim
  std::vector<double> projection;  // dim x dim, z = projection * m
  std::vector<double> bias;        // dim

  Tower() = default;
  Tower(int buckets, int dim);

  std::span<double> Row(size_t bucket) {
    return {embeddings.data() + bucket * dim, static_cast<size_t>(dim)};
  }
  std::span<const double> Row(size_t bucket) const {
    return {embeddings.data() + bucket * dim, static_cast<size_t>(dim)};
  }

  void SetZero();
  size_t ParameterCount() const {
    return embeddings.size() + projection.size() + bias.size();
  }
  // Every tensor in a fixed order: embeddings, projection, bias.
  std::vector<std::vector<double>*> Tensors() {
    return {&embeddings, &projection, &bias};
  }
  std::vector<const std::vector<double>*> Tensors() const {
    return {&embeddings, &projection, &bias};
  }
};

size_t TokenBucket(std::string_view token, int buckets);

// Forward-pass intermediates needed by the backward pass.
struct EncodeCache {
  std::vector<size_t> buckets;  // one per token occurrence
  Vec pooled;                   // m
  Vec output;                   // v
};

class DualEncoder {
 public:
  DualEncoder() = default;
  // Initializes every parameter uniformly in [-1/sqrt(dim), 1/sqrt(dim)]
  // from a counter-based stream keyed by config.rng_seed.
  explicit DualEncoder(const EncoderConfig& config);

  const EncoderConfig& config() const { return config_; }
  int dim() const { return config_.dim; }

  Tower& tower(Side side) {
    return side == Side::kQuestion ? question_ : passage_;
  }
  const Tower& tower(Side side) const {
    return side == Side::kQuestion ? question_ : passage_;
  }

  Vec EncodeQuestion(const Question& q) const;
  Vec EncodePassage(const Passage& p) const;
  Vec Encode(Side side, std::span<const std::string> tokens) const;
  EncodeCache EncodeWithCache(Side side,
                              std::span<const std::string> tokens) const;

  // FNV-1a over the configuration and the raw bytes of every parameter.
  uint64_t ContentHash() const;

  bool AllFinite() const;

  // Versioned JSON checkpoint.
  void Save(const std::filesystem::path& path) const;
  static DualEncoder Load(const std::filesystem::path& path);
  std::string ToJson() const;
  static DualEncoder FromJson(std::string_view text);

 private:
  EncoderConfig config_;
  Tower question_;
  Tower passage_;
};

struct ModelGradient {
  Tower question;
  Tower passage;

  ModelGradient() = default;
  explicit ModelGradient(const EncoderConfig& config);

  Tower& tower(Side side) {
    return side == Side::kQuestion ? question : passage;
  }
  void SetZero();
};

struct EncodeRequest {
  Side side = Side::kQuestion;
  std::span<const std::string> tokens;
};

// Accumulates d(sum_i <upstream_i, output_i>)/d(parameters) into `grad`.
void AccumulateBackward(const DualEncoder& model, Side side,
                        const EncodeCache& cache, std::span<const double> upstream,
                        ModelGradient& grad);

// Exact parameter gradients for a batch of encoder outputs given upstream
// gradients, one per output. Elements are reduced in input order.
ModelGradient BackpropBatch(const DualEncoder& model,
                            std::span<const EncodeRequest> batch,
                            std::span<const Vec> upstream);

double RelevanceScore(std::span<const double> question,
                      std::span<const double> passage);

double CosineSimilarity(std::span<const double> a, std::span<const double> b);

}  // namespace rlab

#endif  // RLAB_EMBEDDER_H_
