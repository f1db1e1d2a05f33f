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

#include "rlab/core.h"

#include <algorithm>
#include <cctype>

namespace rlab {
namespace {

bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }
bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
char Lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::vector<std::string> SplitSpaces(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

}  // namespace

Question MakeQuestion(std::string id, std::string text,
                      std::vector<std::string> answers) {
  if (answers.empty()) {
    throw InvalidInput("question '" + id + "' has no answers");
  }
  Question q;
  q.tokens = Tokenize(text);
  q.id = std::move(id);
  q.text = std::move(text);
  q.answers = std::move(answers);
  return q;
}

Passage MakePassage(std::string id, std::string title, std::string text) {
  if (text.empty()) throw InvalidInput("passage '" + id + "' has empty text");
  Passage p;
  p.tokens = Tokenize(title);
  Tokens body = Tokenize(text);
  p.tokens.insert(p.tokens.end(), body.begin(), body.end());
  p.id = std::move(id);
  p.title = std::move(title);
  p.text = std::move(text);
  return p;
}

std::string_view RelationName(Relation relation) {
  switch (relation) {
    case Relation::kParaphrase: return "paraphrase";
    case Relation::kMeq: return "meq";
    case Relation::kCandidate: return "candidate";
  }
  return "candidate";
}

Relation ParseRelation(std::string_view name) {
  if (name == "paraphrase") return Relation::kParaphrase;
  if (name == "meq") return Relation::kMeq;
  if (name == "candidate") return Relation::kCandidate;
  throw InvalidInput("unknown relation '" + std::string(name) + "'");
}

std::string_view StageName(FilterStage stage) {
  switch (stage) {
    case FilterStage::kQuality: return "quality";
    case FilterStage::kLexical: return "lexical";
    case FilterStage::kSemantic: return "semantic";
    case FilterStage::kParaphrase: return "paraphrase";
    case FilterStage::kAnswer: return "answer";
  }
  return "quality";
}

void FilterConfig::Validate() const {
  if (eps_lexical < 1) throw InvalidInput("eps_lexical must be >= 1");
  if (!(eps_semantic_cos >= 0.0 && eps_semantic_cos <= 1.0)) {
    throw InvalidInput("eps_semantic_cos must lie in [0, 1]");
  }
}

Tokens Tokenize(std::string_view text) {
  Tokens tokens;
  for (std::string& raw : SplitSpaces(text)) {
    size_t begin = 0, end = raw.size();
    while (begin < end && IsPunct(raw[begin])) ++begin;
    while (end > begin && IsPunct(raw[end - 1])) --end;
    if (begin == end) continue;
    std::string token = raw.substr(begin, end - begin);
    std::transform(token.begin(), token.end(), token.begin(), Lower);
    tokens.push_back(std::move(token));
  }
  return tokens;
}

int WordEditDistance(std::span<const std::string> a,
                     std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<int> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    int diagonal = row[0];
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      int above = row[j];
      int substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::string NormalizeAnswer(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    if (IsPunct(c)) continue;
    cleaned.push_back(IsSpace(c) ? ' ' : Lower(c));
  }
  std::string out;
  for (const std::string& word : SplitSpaces(cleaned)) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

bool ContainsAnswer(std::string_view passage_text,
                    std::span<const std::string> answers) {
  const std::vector<std::string> haystack =
      SplitSpaces(NormalizeAnswer(passage_text));
  for (const std::string& answer : answers) {
    const std::vector<std::string> needle = SplitSpaces(NormalizeAnswer(answer));
    if (needle.empty()) continue;
    if (std::search(haystack.begin(), haystack.end(), needle.begin(),
                    needle.end()) != haystack.end()) {
      return true;
    }
  }
  return false;
}

bool ContainsAnswer(const Passage& passage,
                    std::span<const std::string> answers) {
  return ContainsAnswer(passage.text, answers);
}

Corpus::Corpus(std::vector<Passage> passages) : passages_(std::move(passages)) {
  index_.reserve(passages_.size());
  for (size_t i = 0; i < passages_.size(); ++i) {
    if (!index_.emplace(passages_[i].id, i).second) {
      throw InvalidInput("duplicate passage id '" + passages_[i].id + "'");
    }
  }
}

const Passage* Corpus::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &passages_[it->second];
}

const Passage& Corpus::at(std::string_view id) const {
  const Passage* p = Find(id);
  if (p == nullptr) throw DataError("unknown passage id '" + std::string(id) + "'");
  return *p;
}

size_t Corpus::IndexOf(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw DataError("unknown passage id '" + std::string(id) + "'");
  }
  return it->second;
}

void QuestionBank::Add(Question q) {
  if (!index_.emplace(q.id, questions_.size()).second) {
    throw InvalidInput("duplicate question id '" + q.id + "'");
  }
  questions_.push_back(std::move(q));
}

const Question* QuestionBank::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &questions_[it->second];
}

const Question& QuestionBank::at(std::string_view id) const {
  const Question* q = Find(id);
  if (q == nullptr) {
    throw DataError("unknown question id '" + std::string(id) + "'");
  }
  return *q;
}

}  // namespace rlab
