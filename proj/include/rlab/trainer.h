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

// Dual-encoder training with a passage-side contrastive loss plus an optional
// query-side loss over (question, paraphrase, minimally edited question)
// triples:
//
//   L = L_QP + lambda * L_QQ
//
// L_QP is a softmax over every distinct passage in the batch (gold passages
// of the other examples and all sampled hard negatives act as negatives).
// Paraphrases and minimally edited questions are re-drawn from per-question
// pools every epoch. Optimization is Adam with linear warmup and linear
// decay to zero.

#ifndef RLAB_TRAINER_H_
#define RLAB_TRAINER_H_

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/core.h"
#include "rlab/embedder.h"
#include "rlab/io.h"
#include "rlab/lexindex.h"
#include "rlab/losses.h"

namespace rlab {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Origin { kOriginal, kAugmentedMeq };

struct TrainingExample {
  std::string question_id;
  std::string positive;
  std::vector<std::string> hard_negatives;  // mined, positive excluded
  Origin origin = Origin::kOriginal;
};

struct MeqAugmentation {
  std::string question_id;
  std::string positive;
  std::vector<std::string> hard_negatives;
};

struct AugmentationPool {
  std::vector<std::string> paraphrases;  // question ids
  std::vector<MeqAugmentation> meqs;
};

// Keyed by original question id.
using AugmentationPools = std::map<std::string, AugmentationPool>;

enum class SelectionMode { kDev, kContrast };

struct TrainConfig {
  double learning_rate = 1e-5;
  int batch_size = 64;
  int epochs = 40;
  double warmup_fraction = 0.05;
  LossConfig loss;
  int hard_negatives_per_question = 1;
  // Number of pooled minimally edited questions admitted as extra L_QP
  // examples (taken round-robin across originals).
  int augment_count = 0;
  uint64_t seed = 0;
  EncoderConfig encoder;
  SelectionMode selection = SelectionMode::kDev;

  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void Validate() const;
};

struct TrainingData {
  Corpus corpus;
  QuestionBank questions;  // originals, augmentations and eval questions
  std::vector<TrainingExample> examples;  // originals
  AugmentationPools pools;
  std::vector<CandidateSet> dev_sets;
  std::vector<CandidateSet> contrast_sets;
};

// One element of a training batch after per-epoch sampling.
struct BatchItem {
  std::string question_id;
  std::string positive;
  std::vector<std::string> negatives;
  Origin origin = Origin::kOriginal;
  std::optional<std::string> q_plus;
  std::optional<std::string> q_minus;
};

struct StepLosses {
  double l_qp = 0.0;
  double l_qq = 0.0;
  double combined = 0.0;
  int qq_terms = 0;
};

// Batch objective and, when `grad` is non-null, its exact gradient
// (accumulated into *grad, which must be zeroed by the caller). L_QP is
// averaged over all items, L_QQ over the originals that have a term.
StepLosses BatchObjective(const DualEncoder& model, const QuestionBank& questions,
                          const Corpus& corpus, std::span<const BatchItem> batch,
                          const LossConfig& loss, ModelGradient* grad);

struct AdamState {
  ModelGradient first;
  ModelGradient second;
  int64_t step = 0;

  AdamState() = default;
  explicit AdamState(const EncoderConfig& config) : first(config), second(config) {}
};

void AdamUpdate(DualEncoder& model, const ModelGradient& grad, AdamState& state,
                double lr, double beta1, double beta2, double eps);

// Linear warmup over the first `warmup_steps` steps (step is 0-based and
// the first step already uses lr / warmup_steps), then linear decay to 0.
double ScheduledLearningRate(double base_lr, int64_t step, int64_t total_steps,
                             int64_t warmup_steps);

// Uniform draw from each non-empty pool.
struct AugmentationDraw {
  std::optional<std::string> q_plus;
  std::optional<std::string> q_minus;
};
AugmentationDraw SampleAugmentations(const AugmentationPool* pool, Rng& rng);

struct StepRecord {
  int64_t step = 0;
  StepLosses losses;
};

struct EpochMetrics {
  int epoch = 0;  // 1-based
  double l_qp = 0.0;
  double l_qq = 0.0;
  double combined = 0.0;
  int steps = 0;
};

class Trainer {
 public:
  Trainer(TrainConfig config, const TrainingData& data);
  Trainer(TrainConfig config, const TrainingData& data, DualEncoder initial);

  const DualEncoder& model() const { return model_; }
  const TrainConfig& config() const { return config_; }
  const std::vector<StepRecord>& step_log() const { return step_log_; }
  int64_t total_steps() const { return total_steps_; }
  int64_t warmup_steps() const { return warmup_steps_; }
  // Originals followed by admitted augmented examples.
  const std::vector<TrainingExample>& epoch_examples() const { return examples_; }

  // Sampled batches for `epoch` (0-based); a pure function of seed and epoch.
  std::vector<std::vector<BatchItem>> PlanEpoch(int epoch) const;

  // One optimizer step on `batch`.
  StepLosses Step(std::span<const BatchItem> batch);

  EpochMetrics RunEpoch(int epoch);

 private:
  TrainConfig config_;
  const TrainingData& data_;
  DualEncoder model_;
  AdamState adam_;
  ModelGradient grad_;
  std::vector<TrainingExample> examples_;
  int64_t total_steps_ = 0;
  int64_t warmup_steps_ = 0;
  int64_t step_ = 0;
  std::vector<StepRecord> step_log_;
};

struct EpochReport {
  EpochMetrics metrics;
  double dev_mrr = 0.0;
  double dev_mean_rank = 0.0;
  std::optional<double> contrast_mrr;
  std::optional<double> contrast_mean_rank;
  std::string checkpoint;  // file name, empty when not persisted
};

struct TrainResult {
  std::vector<EpochReport> epochs;
  int best_dev_epoch = 0;
  std::optional<int> best_contrast_epoch;
  int selected_epoch = 0;
  DualEncoder selected_model;
  std::vector<StepRecord> step_log;
};

// Full training run. After every epoch the model is evaluated on the dev
// (and, if present, contrast) candidate sets. When `out_dir` is non-empty,
// writes epoch_<k>.ckpt, metrics.csv and selection.json there.
TrainResult Train(const TrainConfig& config, const TrainingData& data,
                  const std::filesystem::path& out_dir = {});

std::string MetricsCsv(const std::vector<StepRecord>& log);
Json SelectionReport(const TrainConfig& config, const TrainResult& result);

// I/O for the training data files.
Json ToJson(const TrainingExample& e);
std::vector<TrainingExample> ReadTrainingExamples(const std::filesystem::path& path);
void WriteTrainingExamples(const std::filesystem::path& path,
                           const std::vector<TrainingExample>& examples);
std::vector<Json> PoolsToJson(const AugmentationPools& pools);
AugmentationPools ReadPools(const std::filesystem::path& path);
void WritePools(const std::filesystem::path& path, const AugmentationPools& pools);

}  // namespace rlab

#endif  // RLAB_TRAINER_H_
