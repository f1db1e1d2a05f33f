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


// Small generated world shared by the trainer, evaluation and cli tests.

#ifndef RLAB_TESTS_FIXTURES_H_
#define RLAB_TESTS_FIXTURES_H_

#include "rlab/experiment.h"

namespace rlab::fixture {

inline WorldConfig TinyWorldConfig(uint64_t seed = 5) {
  WorldConfig w;
  w.n_entities = 40;
  w.n_passages = 600;
  w.n_train_questions = 80;
  w.n_contrast_questions = 30;
  w.n_dev_questions = 30;
  w.n_test_questions = 30;
  w.seed = seed;
  return w;
}

inline TrainConfig TinyTrainConfig() {
  TrainConfig t;
  t.learning_rate = 1e-2;
  t.batch_size = 16;
  t.epochs = 2;
  t.encoder.hash_buckets = 2048;
  t.encoder.dim = 16;
  t.seed = 9;
  t.encoder.rng_seed = 9;
  return t;
}

inline const PreparedWorld& TinyWorld() {
  static const PreparedWorld world = PrepareWorld(TinyWorldConfig());
  return world;
}

inline const TrainingData& TinyData() {
  static const TrainingData data = MakeTrainingData(TinyWorld());
  return data;
}

}  // namespace rlab::fixture

#endif  // RLAB_TESTS_FIXTURES_H_
