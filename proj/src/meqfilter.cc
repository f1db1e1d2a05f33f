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

#include "rlab/meqfilter.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "rlab/io.h"

namespace rlab {
namespace {

using Counts = std::map<std::string, int>;

Counts CountTokens(std::span<const std::string> tokens) {
  Counts counts;
  for (const std::string& t : tokens) ++counts[t];
  return counts;
}

FilterVerdict Pass(FilterStage stage) { return {stage, true, ""}; }
FilterVerdict Fail(FilterStage stage, std::string reason) {
  return {stage, false, std::move(reason)};
}

}  // namespace

const std::set<std::string>& DefaultStopwords() {
  static const std::set<std::string> kStopwords = {
      "a",    "an",   "the",  "of",   "in",   "on",   "at",   "to",
      "for",  "by",   "with", "from", "is",   "was",  "were", "are",
      "be",   "been", "did",  "do",   "does", "and",  "or",   "as",
      "that", "this", "it",   "its",  "has",  "had",  "have"};
  return kStopwords;
}

bool ContentMultisetParaphrase(const Question& q, const Question& q2) {
  auto content = [](const Tokens& tokens) {
    Counts counts;
    for (const std::string& t : tokens) {
      if (!DefaultStopwords().count(t)) ++counts[t];
    }
    return counts;
  };
  return content(q.tokens) == content(q2.tokens);
}

FilterVerdict QualityControl(const Question& q, const Question& q2,
                             const FilterConfig& cfg) {
  Counts qw1, qw2;
  for (const std::string& t : q.tokens) {
    if (cfg.question_words.count(t)) ++qw1[t];
  }
  for (const std::string& t : q2.tokens) {
    if (cfg.question_words.count(t)) ++qw2[t];
  }
  if (qw1 != qw2) {
    return Fail(FilterStage::kQuality, "question words differ");
  }
  // Multiset difference q2 - q.
  Counts base = CountTokens(q.tokens);
  std::vector<std::string> added;
  for (const auto& [token, n] : CountTokens(q2.tokens)) {
    auto it = base.find(token);
    int extra = n - (it == base.end() ? 0 : it->second);
    for (int i = 0; i < extra; ++i) added.push_back(token);
  }
  if (added.size() == 1 && cfg.banned_added_words.count(added[0])) {
    return Fail(FilterStage::kQuality, "only added word is '" + added[0] + "'");
  }
  return Pass(FilterStage::kQuality);
}

FilterVerdict LexicalFilter(const Question& q, const Question& q2,
                            const FilterConfig& cfg) {
  const int d = WordEditDistance(q.tokens, q2.tokens);
  if (d == 0) return Fail(FilterStage::kLexical, "edit distance 0");
  if (d > cfg.eps_lexical) {
    return Fail(FilterStage::kLexical, "edit distance " + std::to_string(d) +
                                           " exceeds " +
                                           std::to_string(cfg.eps_lexical));
  }
  return Pass(FilterStage::kLexical);
}

FilterVerdict SemanticFilter(std::span<const double> vq,
                             std::span<const double> vq2,
                             const FilterConfig& cfg) {
  const double cos = CosineSimilarity(vq, vq2);
  if (cos < cfg.eps_semantic_cos) {
    return Fail(FilterStage::kSemantic,
                "cosine " + FormatDouble(cos) + " below " +
                    FormatDouble(cfg.eps_semantic_cos));
  }
  return Pass(FilterStage::kSemantic);
}

FilterVerdict ParaphraseFilter(const Question& q, const Question& q2,
                               const ParaphraseDetector& detector) {
  if (detector(q, q2)) return Fail(FilterStage::kParaphrase, "paraphrase");
  return Pass(FilterStage::kParaphrase);
}

FilterVerdict AnswerDifference(std::span<const std::string> answers,
                               std::span<const std::string> answers2) {
  std::set<std::string> first;
  for (const std::string& a : answers) first.insert(NormalizeAnswer(a));
  for (const std::string& a : answers2) {
    std::string norm = NormalizeAnswer(a);
    if (first.count(norm)) {
      return Fail(FilterStage::kAnswer, "shared answer '" + norm + "'");
    }
  }
  return Pass(FilterStage::kAnswer);
}

QuestionPair EvaluateCandidate(const Question& q, const Question& q2,
                               const FilterConfig& cfg,
                               const ParaphraseDetector& detector,
                               const QuestionEmbedder& embed,
                               const StageOrder& order) {
  QuestionPair pair;
  pair.original_id = q.id;
  pair.variant_id = q2.id;
  pair.edit_distance = WordEditDistance(q.tokens, q2.tokens);
  bool all_passed = true;
  for (FilterStage stage : order) {
    FilterVerdict verdict;
    switch (stage) {
      case FilterStage::kQuality:
        verdict = QualityControl(q, q2, cfg);
        break;
      case FilterStage::kLexical:
        verdict = LexicalFilter(q, q2, cfg);
        break;
      case FilterStage::kSemantic: {
        Vec a = embed(q), b = embed(q2);
        pair.semantic_similarity = CosineSimilarity(a, b);
        verdict = SemanticFilter(a, b, cfg);
        break;
      }
      case FilterStage::kParaphrase:
        verdict = ParaphraseFilter(q, q2, detector);
        break;
      case FilterStage::kAnswer:
        verdict = AnswerDifference(q.answers, q2.answers);
        break;
    }
    pair.filter_report.push_back(verdict);
    if (!verdict.passed) {
      all_passed = false;
      break;
    }
  }
  pair.relation = all_passed ? Relation::kMeq : Relation::kCandidate;
  return pair;
}

FilterOutcome FilterCandidates(const Question& q,
                               std::span<const MeqCandidate> candidates,
                               const FilterConfig& cfg,
                               const ParaphraseDetector& detector,
                               const QuestionEmbedder& embed) {
  cfg.Validate();
  FilterOutcome outcome;
  outcome.reports.reserve(candidates.size());
  for (const MeqCandidate& c : candidates) {
    if (c.frequency < 1) {
      throw InvalidInput("candidate '" + c.question.id + "' has frequency < 1");
    }
    outcome.reports.push_back(EvaluateCandidate(q, c.question, cfg, detector, embed));
  }
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (outcome.reports[i].relation != Relation::kMeq) continue;
    if (!outcome.selected) {
      outcome.selected = i;
      continue;
    }
    const size_t best = *outcome.selected;
    const int fi = -candidates[i].frequency, fb = -candidates[best].frequency;
    if (std::tie(fi, outcome.reports[i].edit_distance, candidates[i].question.text) <
        std::tie(fb, outcome.reports[best].edit_distance,
                 candidates[best].question.text)) {
      outcome.selected = i;
    }
  }
  return outcome;
}

}  // namespace rlab
