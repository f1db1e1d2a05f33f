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

// Minimally-edited-question filtering. A candidate q2 generated for q is kept
// only if it survives five stages:
//
//   quality     same question words; q2 does not just add a banned word
//   lexical     1 <= word edit distance <= eps_lexical
//   semantic    cosine(embed(q), embed(q2)) >= eps_semantic_cos
//   paraphrase  the paraphrase detector does not fire
//   answer      normalized answer sets are disjoint
//
// Among survivors the most frequently generated candidate wins.

#ifndef RLAB_MEQFILTER_H_
#define RLAB_MEQFILTER_H_

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "rlab/core.h"
#include "rlab/embedder.h"

namespace rlab {

using ParaphraseDetector =
    std::function<bool(const Question& q, const Question& q2)>;
using QuestionEmbedder = std::function<Vec(const Question& q)>;

const std::set<std::string>& DefaultStopwords();

// Paraphrase iff the multisets of non-stopword tokens are equal.
bool ContentMultisetParaphrase(const Question& q, const Question& q2);

FilterVerdict QualityControl(const Question& q, const Question& q2,
                             const FilterConfig& cfg);
FilterVerdict LexicalFilter(const Question& q, const Question& q2,
                            const FilterConfig& cfg);
// Throws InvalidInput for zero-norm vectors.
FilterVerdict SemanticFilter(std::span<const double> vq,
                             std::span<const double> vq2,
                             const FilterConfig& cfg);
FilterVerdict ParaphraseFilter(const Question& q, const Question& q2,
                               const ParaphraseDetector& detector);
FilterVerdict AnswerDifference(std::span<const std::string> answers,
                               std::span<const std::string> answers2);

using StageOrder = std::array<FilterStage, 5>;
inline constexpr StageOrder kDefaultStageOrder = {
    FilterStage::kQuality, FilterStage::kLexical, FilterStage::kSemantic,
    FilterStage::kParaphrase, FilterStage::kAnswer};

// Runs the stages in `order`, stopping at the first failure. The returned
// pair has relation kMeq iff every stage passed.
QuestionPair EvaluateCandidate(const Question& q, const Question& q2,
                               const FilterConfig& cfg,
                               const ParaphraseDetector& detector,
                               const QuestionEmbedder& embed,
                               const StageOrder& order = kDefaultStageOrder);

struct MeqCandidate {
  Question question;
  int frequency = 1;  // >= 1
};

struct FilterOutcome {
  std::optional<size_t> selected;     // index into the candidate list
  std::vector<QuestionPair> reports;  // one per candidate, input order
};

// Survivors are ranked by frequency (desc), edit distance (asc), then text.
FilterOutcome FilterCandidates(const Question& q,
                               std::span<const MeqCandidate> candidates,
                               const FilterConfig& cfg,
                               const ParaphraseDetector& detector,
                               const QuestionEmbedder& embed);

}  // namespace rlab

#endif  // RLAB_MEQFILTER_H_
