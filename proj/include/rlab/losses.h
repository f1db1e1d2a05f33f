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

// Training objectives over relevance scores. Every loss returns its value
// together with the gradient with respect to each input score.

#ifndef RLAB_LOSSES_H_
#define RLAB_LOSSES_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rlab {

enum class QqVariant { kInfoNce, kDotProduct, kTriplet };

std::string_view QqVariantName(QqVariant v);
QqVariant ParseQqVariant(std::string_view name);

struct LossConfig {
  QqVariant qq_variant = QqVariant::kInfoNce;
  double lambda = 0.5;
  double margin_alpha = 1.0;
  bool in_batch_negatives = true;  // infonce only

  static double DefaultLambda(QqVariant v);
  void Validate() const;
};

struct LossValue {
  double loss = 0.0;
  // Softmax losses: [d/ds_pos, d/ds_neg_1, ...]. Triplet: [d/ds_pos, d/ds_neg].
  // Dot product: [d/ds_neg].
  std::vector<double> grad;
};

// -log(exp(s_pos) / (exp(s_pos) + sum_i exp(s_neg_i))), max-shifted.
LossValue QpContrastiveLoss(double s_pos, std::span<const double> s_negs);

// Same functional form over question-question scores.
LossValue QqInfoNce(double s_pos, std::span<const double> s_negs);

LossValue QqDotProduct(double s_neg);

// max(0, alpha - s_pos + s_neg); zero subgradient at the kink.
LossValue QqTriplet(double s_pos, double s_neg, double alpha);

double CombinedLoss(double l_qp, double l_qq, double lambda);

}  // namespace rlab

#endif  // RLAB_LOSSES_H_
