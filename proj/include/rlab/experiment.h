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

// Glue between a generated world and the trainer / evaluation harness.

#ifndef RLAB_EXPERIMENT_H_
#define RLAB_EXPERIMENT_H_

#include <span>
#include <string>
#include <vector>

#include "rlab/evalsuite.h"
#include "rlab/lexindex.h"
#include "rlab/synthgen.h"
#include "rlab/trainer.h"

namespace rlab {

// One candidate set per example, drawing random negatives from a single
// stream seeded by `seed`.
std::vector<CandidateSet> BuildCandidateSets(std::span<const TrainingExample> examples,
                                             const QuestionBank& questions,
                                             const Bm25Index& index,
                                             const Corpus& corpus, uint64_t seed);

struct PreparedWorld {
  World world;
  Bm25Index index;
  std::vector<CandidateSet> dev_sets;
  std::vector<CandidateSet> test_sets;
  std::vector<CandidateSet> contrast_sets;
};

// Generates the world, indexes it and builds the evaluation candidate sets.
PreparedWorld PrepareWorld(const WorldConfig& cfg);

TrainingData MakeTrainingData(const PreparedWorld& prepared);

struct ModelMetrics {
  double test_mrr = 0.0;
  double test_mean_rank = 0.0;
  double contrast_mrr = 0.0;
  double identification_rate = 0.0;
  double overlap_at_5 = 0.0;
};

ModelMetrics EvaluateOnWorld(const DualEncoder& model, const PreparedWorld& prepared);

}  // namespace rlab

#endif  // RLAB_EXPERIMENT_H_
