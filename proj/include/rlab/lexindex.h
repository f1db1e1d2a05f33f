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

// BM25 inverted index plus the corpus-mining routines built on it: hard
// negatives, 50-passage ranking candidate sets and candidate gold evidence.

#ifndef RLAB_LEXINDEX_H_
#define RLAB_LEXINDEX_H_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rlab/core.h"
#include "rlab/io.h"
#include "rlab/rng.h"

namespace rlab {

struct Posting {
  uint32_t doc = 0;  // index into doc_ids(), which is sorted by id
  uint32_t tf = 0;
};

struct ScoredPassage {
  std::string id;
  double score = 0.0;
};

class Bm25Index {
 public:
  static constexpr int kFormatVersion = 1;

  // Indexes title+text tokens. Throws InvalidInput on an empty corpus or a
  // duplicate id.
  static Bm25Index Build(std::span<const Passage> corpus, double k1 = 1.2,
                         double b = 0.75);

  // Top-k by score, ties by ascending passage id; zero scores are dropped.
  // Repeated query terms count once.
  std::vector<ScoredPassage> Search(std::span<const std::string> query,
                                    size_t k) const;
  // Every passage with a positive score, in ranking order.
  std::vector<ScoredPassage> RankAll(std::span<const std::string> query) const;

  double Idf(const std::string& term) const;

  size_t size() const { return doc_ids_.size(); }
  double k1() const { return k1_; }
  double b() const { return b_; }
  double avg_doc_length() const { return avg_doc_length_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  const std::vector<uint32_t>& doc_lengths() const { return doc_lengths_; }
  uint32_t DocLength(std::string_view id) const;
  const std::vector<Posting>* PostingsFor(const std::string& term) const;
  size_t vocabulary_size() const { return postings_.size(); }

  Json ToJson() const;
  static Bm25Index FromJson(const Json& j);
  void Save(const std::filesystem::path& path) const;
  static Bm25Index Load(const std::filesystem::path& path);

 private:
  double k1_ = 1.2;
  double b_ = 0.75;
  double avg_doc_length_ = 0.0;
  std::vector<std::string> doc_ids_;  // sorted ascending
  std::vector<uint32_t> doc_lengths_;
  std::map<std::string, std::vector<Posting>> postings_;
};

// Walks the BM25 ranking for q.tokens and keeps passages that do not contain
// any of q's answers and are not in `exclude`, stopping after `count`.
std::vector<std::string> MineHardNegatives(
    const Bm25Index& index, const Corpus& corpus, const Question& q,
    size_t count, std::span<const std::string> exclude = {});

// First (up to) `count` passages in BM25 order that contain an answer.
std::vector<std::string> FindCandidateGold(const Bm25Index& index,
                                           const Corpus& corpus,
                                           const Question& q, size_t count = 3);

struct CandidateSet {
  static constexpr size_t kHardNegatives = 30;
  static constexpr size_t kRandomNegatives = 19;

  std::string question_id;
  std::string positive;
  std::vector<std::string> hard_negatives;
  std::vector<std::string> random_negatives;

  // positive first, then hard, then random.
  std::vector<std::string> AllIds() const;
};

// 30 mined hard negatives plus 19 uniformly drawn random negatives.
// Throws DataError naming the question when the corpus cannot supply them.
CandidateSet BuildCandidateSet(const Question& q, const std::string& positive,
                               const Bm25Index& index, const Corpus& corpus,
                               Rng& rng);

Json ToJson(const CandidateSet& cs);
CandidateSet CandidateSetFromJson(const Json& j);
std::vector<CandidateSet> ReadCandidateSets(const std::filesystem::path& path);
void WriteCandidateSets(const std::filesystem::path& path,
                        const std::vector<CandidateSet>& sets);

}  // namespace rlab

#endif  // RLAB_LEXINDEX_H_
