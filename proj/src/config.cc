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

#include "rlab/config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rlab {
namespace {

std::string Trim(std::string_view s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const size_t end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const char* expected) {
  throw ConfigError("config key '" + key + "': expected " + expected + ", got '" +
                    value + "'");
}

}  // namespace

const std::vector<std::string>& RunConfig::KnownKeys() {
  static const std::vector<std::string> keys = {
      // trainer
      "learning_rate", "batch_size", "epochs", "warmup_fraction", "lambda",
      "qq_variant", "margin_alpha", "in_batch_negatives",
      "hard_negatives_per_question", "augment_count", "seed", "selection",
      // embedder
      "hash_buckets", "dim", "init_seed",
      // synthgen
      "n_entities", "n_attributes", "n_years", "n_passages", "n_train_questions",
      "n_contrast_questions", "n_dev_questions", "n_test_questions",
      "paraphrases_per_question", "meqs_per_question", "vocab_size",
      "synonym_rate", "filler_tokens", "mined_negatives",
      // meqfilter
      "eps_lexical", "eps_semantic_cos", "paraphrase_detector",
      // lexindex
      "k1", "b",
      // evalsuite
      "ks", "overlap_k", "dataset",
      // process
      "threads"};
  return keys;
}

RunConfig RunConfig::Parse(std::string_view text, std::string_view origin) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const size_t eq = trimmed.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    try {
      cfg.Set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str(), path.string());
}

void RunConfig::Set(const std::string& key, const std::string& value) {
  const std::vector<std::string>& known = KnownKeys();
  if (std::find(known.begin(), known.end(), key) == known.end()) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  values_[key] = value;
}

std::optional<std::string> RunConfig::Get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string RunConfig::GetString(const std::string& key,
                                 const std::string& fallback) const {
  return Get(key).value_or(fallback);
}

int RunConfig::GetInt(const std::string& key, int fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  int out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) BadValue(key, *v, "an integer");
  return out;
}

uint64_t RunConfig::GetUint(const std::string& key, uint64_t fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    BadValue(key, *v, "a non-negative integer");
  }
  return out;
}

double RunConfig::GetDouble(const std::string& key, double fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  try {
    size_t used = 0;
    double out = std::stod(*v, &used);
    if (used != v->size()) BadValue(key, *v, "a number");
    return out;
  } catch (const std::logic_error&) {
    BadValue(key, *v, "a number");
  }
}

bool RunConfig::GetBool(const std::string& key, bool fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  BadValue(key, *v, "a boolean");
}

std::vector<int> RunConfig::GetIntList(const std::string& key,
                                       std::vector<int> fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  std::vector<int> out;
  std::istringstream in(*v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    int x = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      BadValue(key, *v, "a comma-separated integer list");
    }
    out.push_back(x);
  }
  return out;
}

Json RunConfig::ToJson() const {
  Json j = Json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

EncoderConfig EncoderConfigFrom(const RunConfig& cfg) {
  EncoderConfig e;
  e.hash_buckets = cfg.GetInt("hash_buckets", e.hash_buckets);
  e.dim = cfg.GetInt("dim", e.dim);
  e.rng_seed = cfg.GetUint("init_seed", cfg.GetUint("seed", 0));
  return e;
}

TrainConfig TrainConfigFrom(const RunConfig& cfg) {
  TrainConfig t;
  try {
    t.learning_rate = cfg.GetDouble("learning_rate", t.learning_rate);
    t.batch_size = cfg.GetInt("batch_size", t.batch_size);
    t.epochs = cfg.GetInt("epochs", t.epochs);
    t.warmup_fraction = cfg.GetDouble("warmup_fraction", t.warmup_fraction);
    t.loss.qq_variant = ParseQqVariant(cfg.GetString("qq_variant", "infonce"));
    t.loss.lambda =
        cfg.GetDouble("lambda", LossConfig::DefaultLambda(t.loss.qq_variant));
    t.loss.margin_alpha = cfg.GetDouble("margin_alpha", t.loss.margin_alpha);
    t.loss.in_batch_negatives =
        cfg.GetBool("in_batch_negatives", t.loss.in_batch_negatives);
    t.hard_negatives_per_question =
        cfg.GetInt("hard_negatives_per_question", t.hard_negatives_per_question);
    t.augment_count = cfg.GetInt("augment_count", t.augment_count);
    t.seed = cfg.GetUint("seed", t.seed);
    t.encoder = EncoderConfigFrom(cfg);
    const std::string selection = cfg.GetString("selection", "dev");
    if (selection == "dev") {
      t.selection = SelectionMode::kDev;
    } else if (selection == "contrast") {
      t.selection = SelectionMode::kContrast;
    } else {
      throw ConfigError("selection must be 'dev' or 'contrast'");
    }
    t.Validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return t;
}

WorldConfig WorldConfigFrom(const RunConfig& cfg) {
  WorldConfig w;
  w.n_entities = cfg.GetInt("n_entities", w.n_entities);
  w.n_attributes = cfg.GetInt("n_attributes", w.n_attributes);
  w.n_years = cfg.GetInt("n_years", w.n_years);
  w.n_passages = cfg.GetInt("n_passages", w.n_passages);
  w.n_train_questions = cfg.GetInt("n_train_questions", w.n_train_questions);
  w.n_contrast_questions = cfg.GetInt("n_contrast_questions", w.n_contrast_questions);
  w.n_dev_questions = cfg.GetInt("n_dev_questions", w.n_dev_questions);
  w.n_test_questions = cfg.GetInt("n_test_questions", w.n_test_questions);
  w.paraphrases_per_question =
      cfg.GetInt("paraphrases_per_question", w.paraphrases_per_question);
  w.meqs_per_question = cfg.GetInt("meqs_per_question", w.meqs_per_question);
  w.vocab_size = cfg.GetInt("vocab_size", w.vocab_size);
  w.synonym_rate = cfg.GetDouble("synonym_rate", w.synonym_rate);
  w.filler_tokens = cfg.GetInt("filler_tokens", w.filler_tokens);
  w.mined_negatives = cfg.GetInt("mined_negatives", w.mined_negatives);
  w.seed = cfg.GetUint("seed", w.seed);
  try {
    w.Validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return w;
}

FilterConfig FilterConfigFrom(const RunConfig& cfg) {
  FilterConfig f;
  f.eps_lexical = cfg.GetInt("eps_lexical", f.eps_lexical);
  f.eps_semantic_cos = cfg.GetDouble("eps_semantic_cos", f.eps_semantic_cos);
  try {
    f.Validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return f;
}

}  // namespace rlab
