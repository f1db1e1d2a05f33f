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

// Evaluation protocols for a trained dual encoder:
//
//  * ranking     rank of the gold passage in a 50-passage candidate set
//                (MR, MRR);
//  * retrieval   exhaustive inner-product search over the corpus, hit rate
//                of answer-containing passages in the top k (Recall@k);
//  * overlap     shared fraction of the top-k passages retrieved for a
//                question and its minimally edited variant;
//  * identify    whether a question scores its paraphrase above its
//                minimally edited variant.
//
// All rankings break score ties by ascending passage id.

#ifndef RLAB_EVALSUITE_H_
#define RLAB_EVALSUITE_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "rlab/core.h"
#include "rlab/embedder.h"
#include "rlab/io.h"
#include "rlab/lexindex.h"

namespace rlab {

// Passage vectors for a whole corpus, stamped with the model content hash.
class CorpusEmbeddings {
 public:
  static CorpusEmbeddings Build(const DualEncoder& model, const Corpus& corpus);

  // Throws CacheError unless built from a model with the same content hash.
  void CheckFresh(const DualEncoder& model) const;

  const Vec& at(std::string_view id) const;
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<Vec>& vectors() const { return vectors_; }
  uint64_t model_hash() const { return model_hash_; }

 private:
  uint64_t model_hash_ = 0;
  std::vector<std::string> ids_;
  std::vector<Vec> vectors_;
  std::unordered_map<std::string, size_t> index_;
};

// 1 + #{score > s_pos} + #{score == s_pos and id < positive id}.
int RankCandidates(const DualEncoder& model, const Question& q,
                   const CandidateSet& cs, const CorpusEmbeddings& passages);

struct RankingResult {
  std::vector<int> ranks;
  double mean_rank = 0.0;
  double mrr = 0.0;
};

RankingResult SummarizeRanks(std::vector<int> ranks);

RankingResult RankingEval(const DualEncoder& model, const QuestionBank& questions,
                          std::span<const CandidateSet> sets,
                          const CorpusEmbeddings& passages);

// Exhaustive top-k by inner product, ties by ascending id.
std::vector<ScoredPassage> DenseRetrieve(const DualEncoder& model,
                                         const CorpusEmbeddings& passages,
                                         const Question& q, size_t k);

struct RetrievalResult {
  std::vector<int> ks;
  std::vector<std::vector<bool>> hits;  // [question][k index]
  std::vector<double> recall;           // per k
};

RetrievalResult RetrievalEval(const DualEncoder& model, const Corpus& corpus,
                              const CorpusEmbeddings& passages,
                              std::span<const Question> questions,
                              std::span<const int> ks);

// |top-k(q) ∩ top-k(q2)| / k.
double PairOverlap(const DualEncoder& model, const CorpusEmbeddings& passages,
                   const Question& q, const Question& q2, size_t k = 5);

double PassageOverlap(const DualEncoder& model, std::span<const QuestionPair> pairs,
                      const QuestionBank& questions,
                      const CorpusEmbeddings& passages, size_t k = 5);

struct EvalTriple {
  std::string q_id;
  std::string para_id;
  std::string meq_id;
};

// Success iff s(q, para) > s(q, meq); ties fail.
bool IdentifiesMeq(const DualEncoder& model, const Question& q,
                   const Question& para, const Question& meq);

double IdentificationRate(const DualEncoder& model,
                          std::span<const EvalTriple> triples,
                          const QuestionBank& questions);

Json ToJson(const EvalTriple& t);
std::vector<EvalTriple> ReadTriples(const std::filesystem::path& path);
void WriteTriples(const std::filesystem::path& path,
                  const std::vector<EvalTriple>& triples);

// {"metric","value","k","dataset","checkpoint"}; k is null when unused.
Json MetricRecord(std::string_view metric, double value, std::optional<int> k,
                  std::string_view dataset, std::string_view checkpoint);

// Fixed-width table of metric records for standard output.
std::string FormatMetricTable(const std::vector<Json>& records);

}  // namespace rlab

#endif  // RLAB_EVALSUITE_H_
