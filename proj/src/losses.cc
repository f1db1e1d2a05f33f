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

#include "rlab/losses.h"

#include <algorithm>
#include <cmath>

#include "rlab/core.h"

namespace rlab {
namespace {

void RequireFinite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InvalidInput(std::string("non-finite ") + what + " score");
  }
}

LossValue SoftmaxLoss(double s_pos, std::span<const double> s_negs) {
  if (s_negs.empty()) throw InvalidInput("softmax loss needs at least one negative");
  RequireFinite(s_pos, "positive");
  double shift = s_pos;
  for (double s : s_negs) {
    RequireFinite(s, "negative");
    shift = std::max(shift, s);
  }
  double total = std::exp(s_pos - shift);
  for (double s : s_negs) total += std::exp(s - shift);
  const double log_total = std::log(total);

  LossValue out;
  out.loss = shift + log_total - s_pos;
  out.grad.reserve(s_negs.size() + 1);
  out.grad.push_back(std::exp(s_pos - shift - log_total) - 1.0);
  for (double s : s_negs) out.grad.push_back(std::exp(s - shift - log_total));
  return out;
}

}  // namespace

std::string_view QqVariantName(QqVariant v) {
  switch (v) {
    case QqVariant::kInfoNce: return "infonce";
    case QqVariant::kDotProduct: return "dot_product";
    case QqVariant::kTriplet: return "triplet";
  }
  return "infonce";
}

QqVariant ParseQqVariant(std::string_view name) {
  if (name == "infonce") return QqVariant::kInfoNce;
  if (name == "dot_product" || name == "dot") return QqVariant::kDotProduct;
  if (name == "triplet") return QqVariant::kTriplet;
  throw InvalidInput("unknown qq_variant '" + std::string(name) + "'");
}

double LossConfig::DefaultLambda(QqVariant v) {
  return v == QqVariant::kDotProduct ? 0.03 : 0.5;
}

void LossConfig::Validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidInput("lambda must be finite and non-negative");
  }
  if (!(margin_alpha > 0.0) || !std::isfinite(margin_alpha)) {
    throw InvalidInput("margin_alpha must be positive");
  }
}

LossValue QpContrastiveLoss(double s_pos, std::span<const double> s_negs) {
  return SoftmaxLoss(s_pos, s_negs);
}

LossValue QqInfoNce(double s_pos, std::span<const double> s_negs) {
  return SoftmaxLoss(s_pos, s_negs);
}

LossValue QqDotProduct(double s_neg) {
  RequireFinite(s_neg, "negative");
  return {s_neg, {1.0}};
}

LossValue QqTriplet(double s_pos, double s_neg, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("triplet margin must be positive");
  RequireFinite(s_pos, "positive");
  RequireFinite(s_neg, "negative");
  // Difference first so that s_pos == s_neg gives exactly alpha.
  const double slack = alpha + (s_neg - s_pos);
  if (slack > 0.0) return {slack, {-1.0, 1.0}};
  return {0.0, {0.0, 0.0}};
}

double CombinedLoss(double l_qp, double l_qq, double lambda) {
  return l_qp + lambda * l_qq;
}

}  // namespace rlab
