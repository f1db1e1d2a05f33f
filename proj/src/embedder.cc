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

#include "rlab/embedder.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rlab/rng.h"

namespace rlab {
namespace {

constexpr int kCheckpointVersion = 1;

using nlohmann::json;

json TowerToJson(const Tower& t) {
  return json{{"embeddings", t.embeddings},
              {"projection", t.projection},
              {"bias", t.bias}};
}

void TowerFromJson(const json& j, Tower& t) {
  auto read = [&](const char* key, std::vector<double>& out) {
    std::vector<double> values = j.at(key).get<std::vector<double>>();
    if (values.size() != out.size()) {
      throw DataError(std::string("checkpoint tensor '") + key +
                      "' has wrong size");
    }
    out = std::move(values);
  };
  read("embeddings", t.embeddings);
  read("projection", t.projection);
  read("bias", t.bias);
}

}  // namespace

void EncoderConfig::Validate() const {
  if (hash_buckets < 1) throw InvalidInput("hash_buckets must be positive");
  if (dim < 1) throw InvalidInput("dim must be positive");
}

Tower::Tower(int buckets, int dim)
    : buckets(buckets),
      dim(dim),
      embeddings(static_cast<size_t>(buckets) * dim, 0.0),
      projection(static_cast<size_t>(dim) * dim, 0.0),
      bias(dim, 0.0) {}

void Tower::SetZero() {
  std::fill(embeddings.begin(), embeddings.end(), 0.0);
  std::fill(projection.begin(), projection.end(), 0.0);
  std::fill(bias.begin(), bias.end(), 0.0);
}

size_t TokenBucket(std::string_view token, int buckets) {
  return static_cast<size_t>(Fnv1a64(token) % static_cast<uint64_t>(buckets));
}

DualEncoder::DualEncoder(const EncoderConfig& config)
    : config_(config),
      question_(config.hash_buckets, config.dim),
      passage_(config.hash_buckets, config.dim) {
  config_.Validate();
  const double range = 1.0 / std::sqrt(static_cast<double>(config_.dim));
  // Both towers start from the same draw (as two encoders cloned from one
  // pretrained checkpoint would) and drift apart during training.
  for (Tower* t : {&question_, &passage_}) {
    uint64_t counter = 0;
    for (std::vector<double>* tensor : t->Tensors()) {
      for (double& x : *tensor) {
        double u = static_cast<double>(CounterHash(config_.rng_seed, counter++) >> 11) *
                   0x1.0p-53;
        x = (2.0 * u - 1.0) * range;
      }
    }
  }
}

EncodeCache DualEncoder::EncodeWithCache(
    Side side, std::span<const std::string> tokens) const {
  if (tokens.empty()) throw InvalidInput("cannot encode an empty token sequence");
  const Tower& t = tower(side);
  const size_t d = static_cast<size_t>(t.dim);
  EncodeCache cache;
  cache.buckets.reserve(tokens.size());
  cache.pooled.assign(d, 0.0);
  for (const std::string& token : tokens) {
    size_t bucket = TokenBucket(token, t.buckets);
    cache.buckets.push_back(bucket);
    std::span<const double> row = t.Row(bucket);
    for (size_t k = 0; k < d; ++k) cache.pooled[k] += row[k];
  }
  const double inv_n = 1.0 / static_cast<double>(tokens.size());
  for (double& x : cache.pooled) x *= inv_n;
  cache.output.resize(d);
  for (size_t r = 0; r < d; ++r) {
    double z = t.bias[r];
    const double* w = t.projection.data() + r * d;
    for (size_t c = 0; c < d; ++c) z += w[c] * cache.pooled[c];
    cache.output[r] = std::tanh(z);
  }
  return cache;
}

Vec DualEncoder::Encode(Side side, std::span<const std::string> tokens) const {
  return EncodeWithCache(side, tokens).output;
}

Vec DualEncoder::EncodeQuestion(const Question& q) const {
  return Encode(Side::kQuestion, q.tokens);
}

Vec DualEncoder::EncodePassage(const Passage& p) const {
  return Encode(Side::kPassage, p.tokens);
}

uint64_t DualEncoder::ContentHash() const {
  uint64_t h = Fnv1a64("rlab-dual-encoder");
  auto mix = [&h](const void* data, size_t bytes) {
    h = Fnv1a64(std::span(static_cast<const unsigned char*>(data), bytes), h);
  };
  mix(&config_.hash_buckets, sizeof(config_.hash_buckets));
  mix(&config_.dim, sizeof(config_.dim));
  mix(&config_.rng_seed, sizeof(config_.rng_seed));
  for (const Tower* t : {&question_, &passage_}) {
    for (const std::vector<double>* tensor : t->Tensors()) {
      mix(tensor->data(), tensor->size() * sizeof(double));
    }
  }
  return h;
}

bool DualEncoder::AllFinite() const {
  for (const Tower* t : {&question_, &passage_}) {
    for (const std::vector<double>* tensor : t->Tensors()) {
      for (double x : *tensor) {
        if (!std::isfinite(x)) return false;
      }
    }
  }
  return true;
}

std::string DualEncoder::ToJson() const {
  json j;
  j["version"] = kCheckpointVersion;
  j["config"] = {{"hash_buckets", config_.hash_buckets},
                 {"dim", config_.dim},
                 {"rng_seed", config_.rng_seed}};
  j["question_tower"] = TowerToJson(question_);
  j["passage_tower"] = TowerToJson(passage_);
  return j.dump();
}

DualEncoder DualEncoder::FromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw DataError("unsupported checkpoint version " +
                      j.at("version").dump());
    }
    EncoderConfig config;
    config.hash_buckets = j.at("config").at("hash_buckets").get<int>();
    config.dim = j.at("config").at("dim").get<int>();
    config.rng_seed = j.at("config").at("rng_seed").get<uint64_t>();
    config.Validate();
    DualEncoder model;
    model.config_ = config;
    model.question_ = Tower(config.hash_buckets, config.dim);
    model.passage_ = Tower(config.hash_buckets, config.dim);
    TowerFromJson(j.at("question_tower"), model.question_);
    TowerFromJson(j.at("passage_tower"), model.passage_);
    if (!model.AllFinite()) throw DataError("checkpoint has non-finite values");
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void DualEncoder::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << ToJson() << '\n';
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

DualEncoder DualEncoder::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return FromJson(buffer.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ModelGradient::ModelGradient(const EncoderConfig& config)
    : question(config.hash_buckets, config.dim),
      passage(config.hash_buckets, config.dim) {}

void ModelGradient::SetZero() {
  question.SetZero();
  passage.SetZero();
}

void AccumulateBackward(const DualEncoder& model, Side side,
                        const EncodeCache& cache,
                        std::span<const double> upstream, ModelGradient& grad) {
  const Tower& t = model.tower(side);
  const size_t d = static_cast<size_t>(t.dim);
  if (upstream.size() != d || cache.output.size() != d) {
    throw InvalidInput("upstream gradient has wrong length");
  }
  Tower& g = grad.tower(side);
  if (g.dim != t.dim || g.buckets != t.buckets) {
    throw InvalidInput("gradient buffer shape does not match model");
  }
  // dz = upstream * (1 - v^2)
  Vec dz(d);
  for (size_t r = 0; r < d; ++r) {
    dz[r] = upstream[r] * (1.0 - cache.output[r] * cache.output[r]);
  }
  Vec dm(d, 0.0);
  for (size_t r = 0; r < d; ++r) {
    g.bias[r] += dz[r];
    double* gw = g.projection.data() + r * d;
    const double* w = t.projection.data() + r * d;
    for (size_t c = 0; c < d; ++c) {
      gw[c] += dz[r] * cache.pooled[c];
      dm[c] += w[c] * dz[r];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(cache.buckets.size());
  for (size_t bucket : cache.buckets) {
    std::span<double> row = g.Row(bucket);
    for (size_t k = 0; k < d; ++k) row[k] += dm[k] * inv_n;
  }
}

ModelGradient BackpropBatch(const DualEncoder& model,
                            std::span<const EncodeRequest> batch,
                            std::span<const Vec> upstream) {
  if (batch.size() != upstream.size()) {
    throw InvalidInput("batch and upstream gradient counts differ");
  }
  ModelGradient grad(model.config());
  for (size_t i = 0; i < batch.size(); ++i) {
    if (upstream[i].size() != static_cast<size_t>(model.dim())) {
      throw InvalidInput("upstream gradient " + std::to_string(i) +
                         " has wrong length");
    }
    EncodeCache cache = model.EncodeWithCache(batch[i].side, batch[i].tokens);
    AccumulateBackward(model, batch[i].side, cache, upstream[i], grad);
  }
  return grad;
}

double RelevanceScore(std::span<const double> question,
                      std::span<const double> passage) {
  if (question.size() != passage.size()) {
    throw InvalidInput("relevance score of vectors with different lengths");
  }
  double s = 0.0;
  for (size_t i = 0; i < question.size(); ++i) s += question[i] * passage[i];
  return s;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("cosine of vectors with different lengths");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw InvalidInput("cosine similarity of a zero-norm vector");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace rlab
