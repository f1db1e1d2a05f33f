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

// Domain records and text utilities shared by every module: tokenization,
// word-level edit distance and answer normalization/containment.

#ifndef RLAB_CORE_H_
#define RLAB_CORE_H_

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rlab {

using Tokens = std::vector<std::string>;

// Error taxonomy. Callers (notably the CLI) map these onto exit codes.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Question {
  std::string id;
  std::string text;
  std::vector<std::string> answers;  // non-empty
  Tokens tokens;                     // == Tokenize(text)
};

// Builds a question with derived tokens. Throws InvalidInput when `answers`
// is empty.
Question MakeQuestion(std::string id, std::string text,
                      std::vector<std::string> answers);

struct Passage {
  std::string id;
  std::string title;
  std::string text;  // non-empty
  Tokens tokens;     // Tokenize(title) followed by Tokenize(text)
};

Passage MakePassage(std::string id, std::string title, std::string text);

enum class Relation { kParaphrase, kMeq, kCandidate };

std::string_view RelationName(Relation relation);
Relation ParseRelation(std::string_view name);

enum class FilterStage { kQuality, kLexical, kSemantic, kParaphrase, kAnswer };

std::string_view StageName(FilterStage stage);

struct FilterVerdict {
  FilterStage stage = FilterStage::kQuality;
  bool passed = true;
  std::string reason;  // non-empty when !passed
};

struct QuestionPair {
  std::string original_id;
  std::string variant_id;
  Relation relation = Relation::kCandidate;
  int edit_distance = 0;
  // Only known once the semantic stage has run.
  std::optional<double> semantic_similarity;
  std::vector<FilterVerdict> filter_report;
};

struct FilterConfig {
  int eps_lexical = 3;
  double eps_semantic_cos = 0.95;  // minimum cosine that survives
  std::set<std::string> banned_added_words = {"first", "last", "new",
                                              "next", "original", "not"};
  std::set<std::string> question_words = {"who",   "what", "when",
                                          "where", "which", "why",
                                          "how",   "whose", "whom"};

  // Throws InvalidInput on out-of-range thresholds.
  void Validate() const;
};

// Lowercases, splits on whitespace and strips punctuation from both ends of
// every token. Tokens that become empty are dropped.
Tokens Tokenize(std::string_view text);

// Levenshtein distance over tokens with unit insert/delete/substitute costs.
int WordEditDistance(std::span<const std::string> a,
                     std::span<const std::string> b);

// Lowercase, drop punctuation, drop the articles a/an/the, collapse spaces.
std::string NormalizeAnswer(std::string_view text);

// True iff some normalized answer occurs as a contiguous run of tokens in the
// normalized passage text.
bool ContainsAnswer(const Passage& passage,
                    std::span<const std::string> answers);
bool ContainsAnswer(std::string_view passage_text,
                    std::span<const std::string> answers);

// Id-indexed passage collection. Order of insertion is preserved.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Passage> passages);

  const std::vector<Passage>& passages() const { return passages_; }
  size_t size() const { return passages_.size(); }
  bool empty() const { return passages_.empty(); }

  const Passage& at(std::string_view id) const;
  const Passage* Find(std::string_view id) const;
  size_t IndexOf(std::string_view id) const;

 private:
  std::vector<Passage> passages_;
  std::unordered_map<std::string, size_t> index_;
};

// Id-indexed question collection.
class QuestionBank {
 public:
  void Add(Question q);
  const Question& at(std::string_view id) const;
  const Question* Find(std::string_view id) const;
  bool Contains(std::string_view id) const { return Find(id) != nullptr; }
  size_t size() const { return questions_.size(); }
  const std::vector<Question>& all() const { return questions_; }

 private:
  std::vector<Question> questions_;
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace rlab

#endif  // RLAB_CORE_H_
