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

// Flat key=value run configuration. Lines look like
//
//   # comment
//   learning_rate = 0.01
//   qq_variant = infonce
//
// Keys are snake_case; the CLI accepts the same keys as --kebab-case flags.

#ifndef RLAB_CONFIG_H_
#define RLAB_CONFIG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlab/core.h"
#include "rlab/io.h"
#include "rlab/synthgen.h"
#include "rlab/trainer.h"

namespace rlab {

class RunConfig {
 public:
  // Every key the configuration understands.
  static const std::vector<std::string>& KnownKeys();

  // Throws ConfigError on malformed lines or unknown keys.
  static RunConfig Parse(std::string_view text, std::string_view origin = "config");
  static RunConfig Load(const std::filesystem::path& path);

  void Set(const std::string& key, const std::string& value);
  bool Has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> Get(const std::string& key) const;

  std::string GetString(const std::string& key, const std::string& fallback) const;
  int GetInt(const std::string& key, int fallback) const;
  uint64_t GetUint(const std::string& key, uint64_t fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  std::vector<int> GetIntList(const std::string& key, std::vector<int> fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  Json ToJson() const;

 private:
  std::map<std::string, std::string> values_;
};

TrainConfig TrainConfigFrom(const RunConfig& cfg);
WorldConfig WorldConfigFrom(const RunConfig& cfg);
FilterConfig FilterConfigFrom(const RunConfig& cfg);
EncoderConfig EncoderConfigFrom(const RunConfig& cfg);

}  // namespace rlab

#endif  // RLAB_CONFIG_H_
