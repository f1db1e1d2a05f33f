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

#include "rlab/experiment.h"

namespace rlab {

std::vector<CandidateSet> BuildCandidateSets(std::span<const TrainingExample> examples,
                                             const QuestionBank& questions,
                                             const Bm25Index& index,
                                             const Corpus& corpus, uint64_t seed) {
  Rng rng(seed);
  std::vector<CandidateSet> sets;
  sets.reserve(examples.size());
  for (const TrainingExample& e : examples) {
    const Question* q = questions.Find(e.question_id);
    if (q == nullptr) throw DataError("unknown question id " + e.question_id);
    sets.push_back(BuildCandidateSet(*q, e.positive, index, corpus, rng));
  }
  return sets;
}

PreparedWorld PrepareWorld(const WorldConfig& cfg) {
  PreparedWorld p{GenerateWorld(cfg), {}, {}, {}, {}};
  p.index = Bm25Index::Build(p.world.corpus.passages());
  // Separate streams so adding test questions never shifts dev candidates.
  p.dev_sets = BuildCandidateSets(p.world.dev, p.world.questions, p.index,
                                  p.world.corpus, DeriveSeed(cfg.seed, 11, 0));
  p.test_sets = BuildCandidateSets(p.world.test, p.world.questions, p.index,
                                   p.world.corpus, DeriveSeed(cfg.seed, 11, 1));
  p.contrast_sets = BuildCandidateSets(p.world.contrast, p.world.questions, p.index,
                                       p.world.corpus, DeriveSeed(cfg.seed, 11, 2));
  return p;
}

TrainingData MakeTrainingData(const PreparedWorld& prepared) {
  TrainingData data;
  data.corpus = prepared.world.corpus;
  data.questions = prepared.world.questions;
  data.examples = prepared.world.train;
  data.pools = prepared.world.pools;
  data.dev_sets = prepared.dev_sets;
  data.contrast_sets = prepared.contrast_sets;
  return data;
}

ModelMetrics EvaluateOnWorld(const DualEncoder& model, const PreparedWorld& prepared) {
  const World& w = prepared.world;
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, w.corpus);
  ModelMetrics m;
  const RankingResult test = RankingEval(model, w.questions, prepared.test_sets, passages);
  m.test_mrr = test.mrr;
  m.test_mean_rank = test.mean_rank;
  m.contrast_mrr =
      RankingEval(model, w.questions, prepared.contrast_sets, passages).mrr;
  m.identification_rate = IdentificationRate(model, w.triples, w.questions);
  m.overlap_at_5 = PassageOverlap(model, w.contrast_pairs, w.questions, passages, 5);
  return m;
}

}  // namespace rlab
