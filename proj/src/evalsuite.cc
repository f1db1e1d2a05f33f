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

#include "rlab/evalsuite.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "rlab/parallel.h"

namespace rlab {

CorpusEmbeddings CorpusEmbeddings::Build(const DualEncoder& model,
                                         const Corpus& corpus) {
  CorpusEmbeddings out;
  out.model_hash_ = model.ContentHash();
  out.ids_.reserve(corpus.size());
  for (const Passage& p : corpus.passages()) out.ids_.push_back(p.id);
  out.vectors_.resize(corpus.size());
  ParallelFor(corpus.size(), [&](size_t i) {
    out.vectors_[i] = model.EncodePassage(corpus.passages()[i]);
  });
  for (size_t i = 0; i < out.ids_.size(); ++i) out.index_.emplace(out.ids_[i], i);
  return out;
}

void CorpusEmbeddings::CheckFresh(const DualEncoder& model) const {
  if (model.ContentHash() != model_hash_) {
    throw CacheError("corpus embeddings are stale for this model");
  }
}

const Vec& CorpusEmbeddings::at(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw DataError("passage '" + std::string(id) + "' has no embedding");
  }
  return vectors_[it->second];
}

int RankCandidates(const DualEncoder& model, const Question& q,
                   const CandidateSet& cs, const CorpusEmbeddings& passages) {
  const Vec vq = model.EncodeQuestion(q);
  const double s_pos = RelevanceScore(vq, passages.at(cs.positive));
  int rank = 1;
  for (const std::vector<std::string>* group :
       {&cs.hard_negatives, &cs.random_negatives}) {
    for (const std::string& id : *group) {
      const double s = RelevanceScore(vq, passages.at(id));
      if (s > s_pos || (s == s_pos && id < cs.positive)) ++rank;
    }
  }
  return rank;
}

RankingResult SummarizeRanks(std::vector<int> ranks) {
  RankingResult out;
  out.ranks = std::move(ranks);
  if (out.ranks.empty()) return out;
  double sum = 0.0, sum_inv = 0.0;
  for (int r : out.ranks) {
    sum += r;
    sum_inv += 1.0 / r;
  }
  const double n = static_cast<double>(out.ranks.size());
  out.mean_rank = sum / n;
  out.mrr = sum_inv / n;
  return out;
}

RankingResult RankingEval(const DualEncoder& model, const QuestionBank& questions,
                          std::span<const CandidateSet> sets,
                          const CorpusEmbeddings& passages) {
  if (sets.empty()) throw InvalidInput("ranking evaluation needs candidate sets");
  passages.CheckFresh(model);
  std::vector<int> ranks(sets.size());
  ParallelFor(sets.size(), [&](size_t i) {
    ranks[i] = RankCandidates(model, questions.at(sets[i].question_id), sets[i],
                              passages);
  });
  return SummarizeRanks(std::move(ranks));
}

std::vector<ScoredPassage> DenseRetrieve(const DualEncoder& model,
                                         const CorpusEmbeddings& passages,
                                         const Question& q, size_t k) {
  passages.CheckFresh(model);
  const Vec vq = model.EncodeQuestion(q);
  std::vector<ScoredPassage> scored(passages.ids().size());
  for (size_t i = 0; i < scored.size(); ++i) {
    scored[i] = {passages.ids()[i], RelevanceScore(vq, passages.vectors()[i])};
  }
  k = std::min(k, scored.size());
  auto before = [](const ScoredPassage& a, const ScoredPassage& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                    scored.end(), before);
  scored.resize(k);
  return scored;
}

RetrievalResult RetrievalEval(const DualEncoder& model, const Corpus& corpus,
                              const CorpusEmbeddings& passages,
                              std::span<const Question> questions,
                              std::span<const int> ks) {
  if (ks.empty() || !std::is_sorted(ks.begin(), ks.end()) || ks.front() < 1) {
    throw InvalidInput("ks must be non-empty, positive and ascending");
  }
  RetrievalResult out;
  out.ks.assign(ks.begin(), ks.end());
  out.hits.assign(questions.size(), std::vector<bool>(ks.size(), false));
  const size_t k_max = static_cast<size_t>(ks.back());
  ParallelFor(questions.size(), [&](size_t qi) {
    std::vector<ScoredPassage> top = DenseRetrieve(model, passages, questions[qi], k_max);
    // Position of the first answer-containing passage.
    size_t first_hit = top.size();
    for (size_t r = 0; r < top.size(); ++r) {
      if (ContainsAnswer(corpus.at(top[r].id), questions[qi].answers)) {
        first_hit = r;
        break;
      }
    }
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      out.hits[qi][ki] = first_hit < static_cast<size_t>(ks[ki]);
    }
  });
  out.recall.assign(ks.size(), 0.0);
  if (!questions.empty()) {
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      size_t count = 0;
      for (const std::vector<bool>& h : out.hits) count += h[ki] ? 1 : 0;
      out.recall[ki] = static_cast<double>(count) / static_cast<double>(questions.size());
    }
  }
  return out;
}

double PairOverlap(const DualEncoder& model, const CorpusEmbeddings& passages,
                   const Question& q, const Question& q2, size_t k) {
  if (k == 0) throw InvalidInput("overlap needs k >= 1");
  std::set<std::string> first;
  for (const ScoredPassage& p : DenseRetrieve(model, passages, q, k)) first.insert(p.id);
  size_t shared = 0;
  for (const ScoredPassage& p : DenseRetrieve(model, passages, q2, k)) {
    shared += first.count(p.id);
  }
  return static_cast<double>(shared) / static_cast<double>(k);
}

double PassageOverlap(const DualEncoder& model, std::span<const QuestionPair> pairs,
                      const QuestionBank& questions,
                      const CorpusEmbeddings& passages, size_t k) {
  if (pairs.empty()) throw InvalidInput("overlap analysis needs pairs");
  std::vector<double> per_pair(pairs.size());
  ParallelFor(pairs.size(), [&](size_t i) {
    per_pair[i] = PairOverlap(model, passages, questions.at(pairs[i].original_id),
                              questions.at(pairs[i].variant_id), k);
  });
  double sum = 0.0;
  for (double v : per_pair) sum += v;
  return sum / static_cast<double>(pairs.size());
}

bool IdentifiesMeq(const DualEncoder& model, const Question& q,
                   const Question& para, const Question& meq) {
  const Vec vq = model.EncodeQuestion(q);
  return RelevanceScore(vq, model.EncodeQuestion(para)) >
         RelevanceScore(vq, model.EncodeQuestion(meq));
}

double IdentificationRate(const DualEncoder& model,
                          std::span<const EvalTriple> triples,
                          const QuestionBank& questions) {
  if (triples.empty()) throw InvalidInput("identification needs triples");
  size_t successes = 0;
  for (const EvalTriple& t : triples) {
    if (IdentifiesMeq(model, questions.at(t.q_id), questions.at(t.para_id),
                      questions.at(t.meq_id))) {
      ++successes;
    }
  }
  return static_cast<double>(successes) / static_cast<double>(triples.size());
}

Json ToJson(const EvalTriple& t) {
  return Json{{"q_id", t.q_id}, {"para_id", t.para_id}, {"meq_id", t.meq_id}};
}

std::vector<EvalTriple> ReadTriples(const std::filesystem::path& path) {
  std::vector<EvalTriple> out;
  ForEachJsonl(path, [&](const Json& j) {
    out.push_back({j.at("q_id").get<std::string>(),
                   j.at("para_id").get<std::string>(),
                   j.at("meq_id").get<std::string>()});
  });
  return out;
}

void WriteTriples(const std::filesystem::path& path,
                  const std::vector<EvalTriple>& triples) {
  std::vector<Json> records;
  for (const EvalTriple& t : triples) records.push_back(ToJson(t));
  WriteJsonl(path, records);
}

Json MetricRecord(std::string_view metric, double value, std::optional<int> k,
                  std::string_view dataset, std::string_view checkpoint) {
  return Json{{"metric", metric},
              {"value", value},
              {"k", k ? Json(*k) : Json(nullptr)},
              {"dataset", dataset},
              {"checkpoint", checkpoint}};
}

std::string FormatMetricTable(const std::vector<Json>& records) {
  int width = 16;
  for (const Json& r : records) {
    width = std::max(width, static_cast<int>(r["metric"].get<std::string>().size()));
  }
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s %6s %12s  %-20s ", width, "metric", "k",
                "value", "dataset");
  out += line;
  out += "checkpoint\n";
  for (const Json& r : records) {
    const std::string k = r["k"].is_null() ? "-" : std::to_string(r["k"].get<int>());
    std::snprintf(line, sizeof(line), "%-*s %6s %12.6f  %-20s ", width,
                  r["metric"].get<std::string>().c_str(), k.c_str(),
                  r["value"].get<double>(), r["dataset"].get<std::string>().c_str());
    out += line;
    out += r["checkpoint"].get<std::string>() + "\n";
  }
  return out;
}

}  // namespace rlab
