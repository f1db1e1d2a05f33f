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

#include "rlab/trainer.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rlab/evalsuite.h"
#include "rlab/rng.h"

namespace rlab {
namespace {

// Stream ids for DeriveSeed(seed, epoch, stream). Separate streams keep the
// example order and passage sampling independent of augmentation draws.
constexpr uint64_t kShuffleStream = 1;
constexpr uint64_t kNegativeStream = 2;
constexpr uint64_t kAugmentStream = 3;

// Distinct encoder inputs of a batch, with their forward caches and the
// gradient of the objective with respect to each output.
class SlotTable {
 public:
  SlotTable(const DualEncoder& model, Side side) : model_(model), side_(side) {}

  size_t Add(const std::string& id, std::span<const std::string> tokens) {
    auto [it, inserted] = slots_.emplace(id, caches_.size());
    if (inserted) {
      caches_.push_back(model_.EncodeWithCache(side_, tokens));
      upstream_.emplace_back(static_cast<size_t>(model_.dim()), 0.0);
    }
    return it->second;
  }

  const Vec& output(size_t slot) const { return caches_[slot].output; }
  size_t size() const { return caches_.size(); }

  void AddUpstream(size_t slot, double coef, const Vec& other) {
    Vec& up = upstream_[slot];
    for (size_t k = 0; k < up.size(); ++k) up[k] += coef * other[k];
  }

  void Backward(ModelGradient& grad) const {
    for (size_t i = 0; i < caches_.size(); ++i) {
      AccumulateBackward(model_, side_, caches_[i], upstream_[i], grad);
    }
  }

 private:
  const DualEncoder& model_;
  Side side_;
  std::unordered_map<std::string, size_t> slots_;
  std::vector<EncodeCache> caches_;
  std::vector<Vec> upstream_;
};

std::vector<TrainingExample> AdmitAugmentations(const TrainConfig& config,
                                                const TrainingData& data) {
  std::vector<TrainingExample> out = data.examples;
  for (const TrainingExample& e : out) {
    if (e.origin != Origin::kOriginal) {
      throw InvalidInput("training examples must be originals; augmentations "
                         "come from the pools");
    }
  }
  // Round-robin over originals so that a small M spreads across questions.
  size_t admitted = 0;
  const size_t budget = static_cast<size_t>(std::max(0, config.augment_count));
  for (size_t round = 0; admitted < budget; ++round) {
    bool any = false;
    for (const TrainingExample& e : data.examples) {
      auto it = data.pools.find(e.question_id);
      if (it == data.pools.end() || round >= it->second.meqs.size()) continue;
      any = true;
      const MeqAugmentation& m = it->second.meqs[round];
      out.push_back({m.question_id, m.positive, m.hard_negatives,
                     Origin::kAugmentedMeq});
      if (++admitted == budget) break;
    }
    if (!any) break;
  }
  return out;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw InvalidInput("learning_rate must be positive");
  if (batch_size < 1) throw InvalidInput("batch_size must be positive");
  if (epochs < 1) throw InvalidInput("epochs must be positive");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw InvalidInput("warmup_fraction must lie in [0, 1)");
  }
  if (hard_negatives_per_question < 0) {
    throw InvalidInput("hard_negatives_per_question must be non-negative");
  }
  if (augment_count < 0) throw InvalidInput("augment_count must be non-negative");
  loss.Validate();
  encoder.Validate();
}

StepLosses BatchObjective(const DualEncoder& model, const QuestionBank& questions,
                          const Corpus& corpus, std::span<const BatchItem> batch,
                          const LossConfig& loss, ModelGradient* grad) {
  StepLosses out;
  if (batch.empty()) return out;
  SlotTable qs(model, Side::kQuestion);
  SlotTable ps(model, Side::kPassage);

  std::vector<size_t> item_q(batch.size()), item_pos(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    item_q[i] = qs.Add(batch[i].question_id, questions.at(batch[i].question_id).tokens);
  }
  for (size_t i = 0; i < batch.size(); ++i) {
    item_pos[i] = ps.Add(batch[i].positive, corpus.at(batch[i].positive).tokens);
  }
  for (const BatchItem& item : batch) {
    for (const std::string& id : item.negatives) ps.Add(id, corpus.at(id).tokens);
  }

  // Passage-side loss over every distinct passage in the batch.
  const double qp_scale = 1.0 / static_cast<double>(batch.size());
  const size_t n_passages = ps.size();
  if (n_passages < 2) {
    throw TrainingError("batch has no negative passages");
  }
  std::vector<double> negs;
  std::vector<size_t> neg_slots;
  for (size_t i = 0; i < batch.size(); ++i) {
    const Vec& vq = qs.output(item_q[i]);
    negs.clear();
    neg_slots.clear();
    for (size_t j = 0; j < n_passages; ++j) {
      if (j == item_pos[i]) continue;
      negs.push_back(RelevanceScore(vq, ps.output(j)));
      neg_slots.push_back(j);
    }
    const LossValue lv =
        QpContrastiveLoss(RelevanceScore(vq, ps.output(item_pos[i])), negs);
    out.l_qp += lv.loss * qp_scale;
    if (grad != nullptr) {
      const double g_pos = lv.grad[0] * qp_scale;
      qs.AddUpstream(item_q[i], g_pos, ps.output(item_pos[i]));
      ps.AddUpstream(item_pos[i], g_pos, vq);
      for (size_t n = 0; n < neg_slots.size(); ++n) {
        const double g = lv.grad[n + 1] * qp_scale;
        qs.AddUpstream(item_q[i], g, ps.output(neg_slots[n]));
        ps.AddUpstream(neg_slots[n], g, vq);
      }
    }
  }

  // Query-side loss for originals with sampled augmentations.
  struct QqTerm {
    size_t q;
    std::optional<size_t> plus;
    size_t minus;
    std::vector<size_t> in_batch;
  };
  std::vector<QqTerm> terms;
  std::vector<size_t> originals;
  for (size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].origin == Origin::kOriginal) originals.push_back(i);
  }
  for (size_t i : originals) {
    const BatchItem& item = batch[i];
    if (!item.q_minus) continue;
    if (loss.qq_variant != QqVariant::kDotProduct && !item.q_plus) continue;
    QqTerm t;
    t.q = item_q[i];
    t.minus = qs.Add(*item.q_minus, questions.at(*item.q_minus).tokens);
    if (item.q_plus) t.plus = qs.Add(*item.q_plus, questions.at(*item.q_plus).tokens);
    if (loss.qq_variant == QqVariant::kInfoNce && loss.in_batch_negatives) {
      for (size_t j : originals) {
        if (j != i && item_q[j] != t.q) t.in_batch.push_back(item_q[j]);
      }
    }
    terms.push_back(std::move(t));
  }
  out.qq_terms = static_cast<int>(terms.size());
  if (!terms.empty()) {
    const double qq_scale = 1.0 / static_cast<double>(terms.size());
    const double weight = loss.lambda * qq_scale;
    // d(score(a, b)) = coef * (v_b da + v_a db)
    auto pair_grad = [&](size_t a, size_t b, double coef) {
      if (grad == nullptr || coef == 0.0) return;
      const Vec va = qs.output(a), vb = qs.output(b);
      qs.AddUpstream(a, coef, vb);
      qs.AddUpstream(b, coef, va);
    };
    for (const QqTerm& t : terms) {
      const Vec& vq = qs.output(t.q);
      const double s_neg = RelevanceScore(vq, qs.output(t.minus));
      LossValue lv;
      switch (loss.qq_variant) {
        case QqVariant::kInfoNce: {
          std::vector<double> qq_negs{s_neg};
          for (size_t j : t.in_batch) qq_negs.push_back(RelevanceScore(vq, qs.output(j)));
          lv = QqInfoNce(RelevanceScore(vq, qs.output(*t.plus)), qq_negs);
          pair_grad(t.q, *t.plus, lv.grad[0] * weight);
          pair_grad(t.q, t.minus, lv.grad[1] * weight);
          for (size_t n = 0; n < t.in_batch.size(); ++n) {
            pair_grad(t.q, t.in_batch[n], lv.grad[n + 2] * weight);
          }
          break;
        }
        case QqVariant::kDotProduct:
          lv = QqDotProduct(s_neg);
          pair_grad(t.q, t.minus, lv.grad[0] * weight);
          break;
        case QqVariant::kTriplet:
          lv = QqTriplet(RelevanceScore(vq, qs.output(*t.plus)), s_neg,
                         loss.margin_alpha);
          pair_grad(t.q, *t.plus, lv.grad[0] * weight);
          pair_grad(t.q, t.minus, lv.grad[1] * weight);
          break;
      }
      out.l_qq += lv.loss * qq_scale;
    }
  }
  out.combined = CombinedLoss(out.l_qp, out.l_qq, loss.lambda);

  if (grad != nullptr) {
    qs.Backward(*grad);
    ps.Backward(*grad);
  }
  return out;
}

void AdamUpdate(DualEncoder& model, const ModelGradient& grad, AdamState& state,
                double lr, double beta1, double beta2, double eps) {
  ++state.step;
  const double correct1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double correct2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  for (Side side : {Side::kQuestion, Side::kPassage}) {
    std::vector<std::vector<double>*> params = model.tower(side).Tensors();
    std::vector<std::vector<double>*> m = state.first.tower(side).Tensors();
    std::vector<std::vector<double>*> v = state.second.tower(side).Tensors();
    const Tower& g_tower = side == Side::kQuestion ? grad.question : grad.passage;
    std::vector<const std::vector<double>*> g = g_tower.Tensors();
    for (size_t t = 0; t < params.size(); ++t) {
      std::vector<double>& p = *params[t];
      std::vector<double>& mt = *m[t];
      std::vector<double>& vt = *v[t];
      const std::vector<double>& gt = *g[t];
      for (size_t i = 0; i < p.size(); ++i) {
        mt[i] = beta1 * mt[i] + (1.0 - beta1) * gt[i];
        vt[i] = beta2 * vt[i] + (1.0 - beta2) * gt[i] * gt[i];
        const double m_hat = mt[i] / correct1;
        const double v_hat = vt[i] / correct2;
        p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
      }
    }
  }
}

double ScheduledLearningRate(double base_lr, int64_t step, int64_t total_steps,
                             int64_t warmup_steps) {
  if (step < warmup_steps) {
    return base_lr * static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
  }
  const int64_t decay_steps = std::max<int64_t>(1, total_steps - warmup_steps);
  const double remaining = static_cast<double>(std::max<int64_t>(0, total_steps - step));
  return base_lr * remaining / static_cast<double>(decay_steps);
}

AugmentationDraw SampleAugmentations(const AugmentationPool* pool, Rng& rng) {
  AugmentationDraw draw;
  if (pool == nullptr) return draw;
  if (!pool->paraphrases.empty()) {
    draw.q_plus = pool->paraphrases[rng.Index(pool->paraphrases.size())];
  }
  if (!pool->meqs.empty()) {
    draw.q_minus = pool->meqs[rng.Index(pool->meqs.size())].question_id;
  }
  return draw;
}

Trainer::Trainer(TrainConfig config, const TrainingData& data)
    : Trainer(config, data, DualEncoder(config.encoder)) {}

Trainer::Trainer(TrainConfig config, const TrainingData& data, DualEncoder initial)
    : config_(std::move(config)),
      data_(data),
      model_(std::move(initial)),
      adam_(model_.config()),
      grad_(model_.config()) {
  config_.Validate();
  examples_ = AdmitAugmentations(config_, data_);
  if (examples_.empty()) throw InvalidInput("no training examples");
  const int64_t per_epoch =
      (static_cast<int64_t>(examples_.size()) + config_.batch_size - 1) /
      config_.batch_size;
  total_steps_ = per_epoch * config_.epochs;
  warmup_steps_ = static_cast<int64_t>(
      std::floor(config_.warmup_fraction * static_cast<double>(total_steps_)));
}

std::vector<std::vector<BatchItem>> Trainer::PlanEpoch(int epoch) const {
  const uint64_t e = static_cast<uint64_t>(epoch);
  Rng shuffle_rng(DeriveSeed(config_.seed, e, kShuffleStream));
  Rng negative_rng(DeriveSeed(config_.seed, e, kNegativeStream));
  Rng augment_rng(DeriveSeed(config_.seed, e, kAugmentStream));

  std::vector<size_t> order(examples_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_rng.Shuffle(order);

  std::vector<std::vector<BatchItem>> batches;
  const size_t per_negatives =
      static_cast<size_t>(config_.hard_negatives_per_question);
  for (size_t start = 0; start < order.size(); start += config_.batch_size) {
    const size_t end = std::min(order.size(), start + config_.batch_size);
    std::vector<BatchItem>& batch = batches.emplace_back();
    for (size_t k = start; k < end; ++k) {
      const TrainingExample& ex = examples_[order[k]];
      BatchItem item;
      item.question_id = ex.question_id;
      item.positive = ex.positive;
      item.origin = ex.origin;
      const size_t take = std::min(per_negatives, ex.hard_negatives.size());
      for (size_t pick :
           negative_rng.SampleWithoutReplacement(ex.hard_negatives.size(), take)) {
        item.negatives.push_back(ex.hard_negatives[pick]);
      }
      if (ex.origin == Origin::kOriginal) {
        auto it = data_.pools.find(ex.question_id);
        AugmentationDraw draw = SampleAugmentations(
            it == data_.pools.end() ? nullptr : &it->second, augment_rng);
        item.q_plus = std::move(draw.q_plus);
        item.q_minus = std::move(draw.q_minus);
      }
      batch.push_back(std::move(item));
    }
  }
  return batches;
}

StepLosses Trainer::Step(std::span<const BatchItem> batch) {
  auto fail = [&](const std::string& what) {
    std::string ids;
    for (const BatchItem& item : batch) ids += (ids.empty() ? "" : ",") + item.question_id;
    throw TrainingError(what + " at step " + std::to_string(step_) + " (batch: " + ids +
                        ")");
  };
  grad_.SetZero();
  StepLosses losses;
  try {
    losses = BatchObjective(model_, data_.questions, data_.corpus, batch, config_.loss,
                            &grad_);
  } catch (const InvalidInput& e) {
    // The loss functions reject NaN/inf scores.
    fail(std::string("non-finite loss (") + e.what() + ")");
  }
  if (!std::isfinite(losses.combined)) fail("non-finite loss");
  const double lr = ScheduledLearningRate(config_.learning_rate, step_,
                                          total_steps_, warmup_steps_);
  AdamUpdate(model_, grad_, adam_, lr, config_.adam_beta1, config_.adam_beta2,
             config_.adam_eps);
  step_log_.push_back({step_, losses});
  ++step_;
  return losses;
}

EpochMetrics Trainer::RunEpoch(int epoch) {
  EpochMetrics metrics;
  metrics.epoch = epoch + 1;
  for (const std::vector<BatchItem>& batch : PlanEpoch(epoch)) {
    StepLosses l = Step(batch);
    metrics.l_qp += l.l_qp;
    metrics.l_qq += l.l_qq;
    metrics.combined += l.combined;
    ++metrics.steps;
  }
  if (metrics.steps > 0) {
    metrics.l_qp /= metrics.steps;
    metrics.l_qq /= metrics.steps;
    metrics.combined /= metrics.steps;
  }
  return metrics;
}

TrainResult Train(const TrainConfig& config, const TrainingData& data,
                  const std::filesystem::path& out_dir) {
  if (data.dev_sets.empty()) throw InvalidInput("training needs dev candidate sets");
  if (config.selection == SelectionMode::kContrast && data.contrast_sets.empty()) {
    throw InvalidInput("contrast selection needs contrast candidate sets");
  }
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());
  }
  Trainer trainer(config, data);
  TrainResult result;
  std::optional<double> best_dev, best_contrast, best_selected;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    EpochReport report;
    report.metrics = trainer.RunEpoch(epoch);
    const DualEncoder& model = trainer.model();
    if (!out_dir.empty()) {
      report.checkpoint = "epoch_" + std::to_string(epoch + 1) + ".ckpt";
      model.Save(out_dir / report.checkpoint);
    }
    const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, data.corpus);
    const RankingResult dev = RankingEval(model, data.questions, data.dev_sets, passages);
    report.dev_mrr = dev.mrr;
    report.dev_mean_rank = dev.mean_rank;
    if (!data.contrast_sets.empty()) {
      const RankingResult contrast =
          RankingEval(model, data.questions, data.contrast_sets, passages);
      report.contrast_mrr = contrast.mrr;
      report.contrast_mean_rank = contrast.mean_rank;
    }
    // Strictly greater: the earliest epoch wins ties.
    if (!best_dev || report.dev_mrr > *best_dev) {
      best_dev = report.dev_mrr;
      result.best_dev_epoch = epoch + 1;
    }
    if (report.contrast_mrr && (!best_contrast || *report.contrast_mrr > *best_contrast)) {
      best_contrast = report.contrast_mrr;
      result.best_contrast_epoch = epoch + 1;
    }
    const double selected_value = config.selection == SelectionMode::kDev
                                      ? report.dev_mrr
                                      : *report.contrast_mrr;
    if (!best_selected || selected_value > *best_selected) {
      best_selected = selected_value;
      result.selected_epoch = epoch + 1;
      result.selected_model = model;
    }
    result.epochs.push_back(std::move(report));
  }
  result.step_log = trainer.step_log();
  if (!out_dir.empty()) {
    WriteTextFile(out_dir / "metrics.csv", MetricsCsv(result.step_log));
    WriteJsonFile(out_dir / "selection.json", SelectionReport(config, result));
  }
  return result;
}

std::string MetricsCsv(const std::vector<StepRecord>& log) {
  std::string out = "step,l_qp,l_qq,combined\n";
  for (const StepRecord& r : log) {
    out += std::to_string(r.step) + "," + FormatDouble(r.losses.l_qp) + "," +
           FormatDouble(r.losses.l_qq) + "," + FormatDouble(r.losses.combined) + "\n";
  }
  return out;
}

Json SelectionReport(const TrainConfig& config, const TrainResult& result) {
  Json epochs = Json::array();
  for (const EpochReport& r : result.epochs) {
    Json e{{"epoch", r.metrics.epoch},
           {"checkpoint", r.checkpoint},
           {"l_qp", r.metrics.l_qp},
           {"l_qq", r.metrics.l_qq},
           {"combined", r.metrics.combined},
           {"dev_mrr", r.dev_mrr},
           {"dev_mean_rank", r.dev_mean_rank}};
    e["contrast_mrr"] = r.contrast_mrr ? Json(*r.contrast_mrr) : Json(nullptr);
    e["contrast_mean_rank"] =
        r.contrast_mean_rank ? Json(*r.contrast_mean_rank) : Json(nullptr);
    epochs.push_back(std::move(e));
  }
  auto best = [&](int epoch, double value) {
    const EpochReport& r = result.epochs.at(static_cast<size_t>(epoch - 1));
    return Json{{"epoch", epoch}, {"checkpoint", r.checkpoint}, {"value", value}};
  };
  Json report;
  report["selection_mode"] = config.selection == SelectionMode::kDev ? "dev" : "contrast";
  report["selected_epoch"] = result.selected_epoch;
  report["selected_checkpoint"] =
      result.epochs.at(static_cast<size_t>(result.selected_epoch - 1)).checkpoint;
  report["best"]["dev_mrr"] =
      best(result.best_dev_epoch,
           result.epochs[static_cast<size_t>(result.best_dev_epoch - 1)].dev_mrr);
  if (result.best_contrast_epoch) {
    report["best"]["contrast_mrr"] = best(
        *result.best_contrast_epoch,
        *result.epochs[static_cast<size_t>(*result.best_contrast_epoch - 1)].contrast_mrr);
  }
  report["epochs"] = std::move(epochs);
  return report;
}

Json ToJson(const TrainingExample& e) {
  return Json{{"question_id", e.question_id},
              {"positive", e.positive},
              {"hard_negatives", e.hard_negatives},
              {"origin", e.origin == Origin::kOriginal ? "original" : "augmented_meq"}};
}

std::vector<TrainingExample> ReadTrainingExamples(const std::filesystem::path& path) {
  std::vector<TrainingExample> out;
  ForEachJsonl(path, [&](const Json& j) {
    TrainingExample e;
    e.question_id = j.at("question_id").get<std::string>();
    e.positive = j.at("positive").get<std::string>();
    e.hard_negatives = j.value("hard_negatives", std::vector<std::string>{});
    const std::string origin = j.value("origin", std::string("original"));
    if (origin == "original") {
      e.origin = Origin::kOriginal;
    } else if (origin == "augmented_meq") {
      e.origin = Origin::kAugmentedMeq;
    } else {
      throw DataError("unknown origin '" + origin + "'");
    }
    if (std::find(e.hard_negatives.begin(), e.hard_negatives.end(), e.positive) !=
        e.hard_negatives.end()) {
      throw DataError("positive '" + e.positive + "' listed as a negative");
    }
    out.push_back(std::move(e));
  });
  return out;
}

void WriteTrainingExamples(const std::filesystem::path& path,
                           const std::vector<TrainingExample>& examples) {
  std::vector<Json> records;
  records.reserve(examples.size());
  for (const TrainingExample& e : examples) records.push_back(ToJson(e));
  WriteJsonl(path, records);
}

std::vector<Json> PoolsToJson(const AugmentationPools& pools) {
  std::vector<Json> records;
  for (const auto& [id, pool] : pools) {
    Json meqs = Json::array();
    for (const MeqAugmentation& m : pool.meqs) {
      meqs.push_back({{"question_id", m.question_id},
                      {"positive", m.positive},
                      {"hard_negatives", m.hard_negatives}});
    }
    records.push_back(
        {{"question_id", id}, {"paraphrases", pool.paraphrases}, {"meqs", meqs}});
  }
  return records;
}

AugmentationPools ReadPools(const std::filesystem::path& path) {
  AugmentationPools pools;
  ForEachJsonl(path, [&](const Json& j) {
    AugmentationPool pool;
    pool.paraphrases = j.value("paraphrases", std::vector<std::string>{});
    for (const Json& m : j.value("meqs", Json::array())) {
      pool.meqs.push_back({m.at("question_id").get<std::string>(),
                           m.at("positive").get<std::string>(),
                           m.value("hard_negatives", std::vector<std::string>{})});
    }
    const std::string id = j.at("question_id").get<std::string>();
    if (!pools.emplace(id, std::move(pool)).second) {
      throw DataError("duplicate pool for '" + id + "'");
    }
  });
  return pools;
}

void WritePools(const std::filesystem::path& path, const AugmentationPools& pools) {
  WriteJsonl(path, PoolsToJson(pools));
}

}  // namespace rlab
