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

// Synthetic question-answering world with known ground truth.
//
// A fact is an (entity, attribute, year) key with a unique person as answer,
// e.g. "who coached the velora club in 1987?" -> "tamiko rensal". Every fact
// has one passage that states the answer verbatim; distractor passages
// mention entity, attribute and year combinations without any answer.
//
// Minimally edited questions swap exactly one slot (entity name, attribute
// verb or year) of a training question so that the question points at a
// sibling fact with a different answer. Paraphrases swap the verb for a
// synonym and/or move the "in <year>" phrase.

#ifndef RLAB_SYNTHGEN_H_
#define RLAB_SYNTHGEN_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlab/core.h"
#include "rlab/evalsuite.h"
#include "rlab/meqfilter.h"
#include "rlab/rng.h"
#include "rlab/trainer.h"

namespace rlab {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WorldConfig {
  int n_entities = 150;
  int n_attributes = 8;   // at most kMaxAttributes
  int n_years = 40;
  int n_passages = 3200;  // facts plus distractors
  int n_train_questions = 500;
  int n_contrast_questions = 200;  // <= n_train_questions
  int n_dev_questions = 150;
  int n_test_questions = 150;
  int paraphrases_per_question = 2;
  int meqs_per_question = 3;
  int vocab_size = 1500;
  double synonym_rate = 0.3;  // share of questions phrased with a synonym verb
  int filler_tokens = 0;      // filler words per fact/distractor passage
  int mined_negatives = 10;   // BM25 negatives kept per training example
  uint64_t seed = 0;

  void Validate() const;
};

inline constexpr int kMaxAttributes = 12;

struct FactKey {
  int entity = 0;
  int attribute = 0;
  int year = 0;
  auto operator<=>(const FactKey&) const = default;
};

enum class FactRole { kTrain, kPoolMeq, kContrastMeq, kDev, kTest };

struct Fact {
  FactKey key;
  std::string answer;
  std::string passage_id;
  FactRole role = FactRole::kTrain;
};

// Which slot a minimally edited question swaps.
enum class Slot { kEntity, kAttribute, kYear };

struct GeneratedMeq {
  Question question;
  std::string gold_passage;
  Slot slot = Slot::kYear;
};

struct SelfCheck {
  int meq_pairs = 0;
  int meq_semantic_passed = 0;  // informational, not enforced
  int paraphrases = 0;
  double semantic_pass_rate() const {
    return meq_pairs == 0 ? 0.0 : static_cast<double>(meq_semantic_passed) / meq_pairs;
  }
};

struct World {
  WorldConfig config;
  std::vector<std::string> entity_names;
  std::vector<std::string> entity_types;
  std::vector<Fact> facts;
  std::map<FactKey, size_t> fact_index;

  Corpus corpus;
  QuestionBank questions;
  std::map<std::string, std::string> gold;  // question id -> passage id
  std::vector<TrainingExample> train;
  std::vector<TrainingExample> dev;       // question + gold, no negatives
  std::vector<TrainingExample> test;
  std::vector<TrainingExample> contrast;  // contrast questions + gold
  std::vector<QuestionPair> contrast_pairs;
  AugmentationPools pools;
  std::vector<EvalTriple> triples;
  SelfCheck self_check;

  const Fact* FindFact(const FactKey& key) const;
};

// Pure function of cfg. Throws GenerationError if the configuration cannot
// be satisfied, or if a generated item fails its label self-check.
World GenerateWorld(const WorldConfig& cfg);

// Synonym / reordering edit of a generator-templated question. Returns
// nullopt when no edit applies. `allow_synonym` and `allow_reorder` restrict
// the edit table.
std::optional<Question> GenerateParaphrase(const Question& q, Rng& rng,
                                           std::string id,
                                           bool allow_synonym = true,
                                           bool allow_reorder = true);

// Single-slot swap towards an existing sibling fact of `q`'s fact.
std::optional<GeneratedMeq> GenerateMeq(const Question& q, const World& world,
                                        Rng& rng, std::string id);

// Paraphrase detector that first maps verb synonyms onto their canonical
// verb, then compares content-token multisets.
bool SynonymAwareParaphrase(const Question& q, const Question& q2);

// The fact a generator-templated question asks about, if any.
std::optional<FactKey> ParseQuestionKey(const Question& q, const World& world);

// Writes corpus.jsonl, questions.jsonl, gold.jsonl, train.jsonl, dev.jsonl,
// test.jsonl, contrast.jsonl, contrast_pairs.jsonl, pools.jsonl and
// triples.jsonl into `dir`. Returns the written file names.
std::vector<std::string> WriteWorld(const World& world,
                                    const std::filesystem::path& dir);

Json WorldConfigToJson(const WorldConfig& cfg);

}  // namespace rlab

#endif  // RLAB_SYNTHGEN_H_
