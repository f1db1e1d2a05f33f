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

#include "rlab/lexindex.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

namespace rlab {
namespace {

bool RankBefore(const ScoredPassage& a, const ScoredPassage& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace

Bm25Index Bm25Index::Build(std::span<const Passage> corpus, double k1,
                           double b) {
  if (corpus.empty()) throw InvalidInput("cannot index an empty corpus");
  if (!(k1 >= 0.0) || !(b >= 0.0 && b <= 1.0)) {
    throw InvalidInput("BM25 parameters out of range");
  }
  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return corpus[x].id < corpus[y].id; });
  for (size_t i = 1; i < order.size(); ++i) {
    if (corpus[order[i]].id == corpus[order[i - 1]].id) {
      throw InvalidInput("duplicate passage id '" + corpus[order[i]].id + "'");
    }
  }

  Bm25Index index;
  index.k1_ = k1;
  index.b_ = b;
  index.doc_ids_.reserve(corpus.size());
  index.doc_lengths_.reserve(corpus.size());
  double total_length = 0.0;
  for (size_t doc = 0; doc < order.size(); ++doc) {
    const Passage& p = corpus[order[doc]];
    index.doc_ids_.push_back(p.id);
    index.doc_lengths_.push_back(static_cast<uint32_t>(p.tokens.size()));
    total_length += static_cast<double>(p.tokens.size());
    std::map<std::string, uint32_t> tf;
    for (const std::string& t : p.tokens) ++tf[t];
    for (const auto& [term, count] : tf) {
      index.postings_[term].push_back({static_cast<uint32_t>(doc), count});
    }
  }
  index.avg_doc_length_ = total_length / static_cast<double>(corpus.size());
  return index;
}

double Bm25Index::Idf(const std::string& term) const {
  const std::vector<Posting>* postings = PostingsFor(term);
  const double df = postings == nullptr ? 0.0 : static_cast<double>(postings->size());
  const double n = static_cast<double>(doc_ids_.size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

const std::vector<Posting>* Bm25Index::PostingsFor(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

uint32_t Bm25Index::DocLength(std::string_view id) const {
  auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), id);
  if (it == doc_ids_.end() || *it != id) {
    throw DataError("passage '" + std::string(id) + "' is not indexed");
  }
  return doc_lengths_[static_cast<size_t>(it - doc_ids_.begin())];
}

std::vector<ScoredPassage> Bm25Index::RankAll(
    std::span<const std::string> query) const {
  std::set<std::string> terms(query.begin(), query.end());
  std::vector<double> scores(doc_ids_.size(), 0.0);
  std::vector<uint32_t> touched;
  for (const std::string& term : terms) {
    const std::vector<Posting>* postings = PostingsFor(term);
    if (postings == nullptr) continue;
    const double idf = Idf(term);
    for (const Posting& p : *postings) {
      const double tf = static_cast<double>(p.tf);
      const double norm =
          k1_ * (1.0 - b_ + b_ * doc_lengths_[p.doc] / avg_doc_length_);
      if (scores[p.doc] == 0.0) touched.push_back(p.doc);
      scores[p.doc] += idf * tf * (k1_ + 1.0) / (tf + norm);
    }
  }
  std::vector<ScoredPassage> ranked;
  ranked.reserve(touched.size());
  for (uint32_t doc : touched) {
    if (scores[doc] > 0.0) ranked.push_back({doc_ids_[doc], scores[doc]});
  }
  std::sort(ranked.begin(), ranked.end(), RankBefore);
  return ranked;
}

std::vector<ScoredPassage> Bm25Index::Search(std::span<const std::string> query,
                                             size_t k) const {
  if (k < 1) throw InvalidInput("bm25 search needs k >= 1");
  std::vector<ScoredPassage> ranked = RankAll(query);
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

Json Bm25Index::ToJson() const {
  Json postings = Json::object();
  for (const auto& [term, list] : postings_) {
    Json entries = Json::array();
    for (const Posting& p : list) entries.push_back({p.doc, p.tf});
    postings[term] = std::move(entries);
  }
  return Json{{"format_version", kFormatVersion},
              {"k1", k1_},
              {"b", b_},
              {"avg_doc_length", avg_doc_length_},
              {"doc_ids", doc_ids_},
              {"doc_lengths", doc_lengths_},
              {"postings", std::move(postings)}};
}

Bm25Index Bm25Index::FromJson(const Json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw DataError("unsupported index format version");
    }
    Bm25Index index;
    index.k1_ = j.at("k1").get<double>();
    index.b_ = j.at("b").get<double>();
    index.avg_doc_length_ = j.at("avg_doc_length").get<double>();
    index.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
    index.doc_lengths_ = j.at("doc_lengths").get<std::vector<uint32_t>>();
    if (index.doc_ids_.size() != index.doc_lengths_.size() ||
        !std::is_sorted(index.doc_ids_.begin(), index.doc_ids_.end())) {
      throw DataError("inconsistent index document table");
    }
    for (const auto& [term, entries] : j.at("postings").items()) {
      std::vector<Posting>& list = index.postings_[term];
      for (const Json& e : entries) {
        Posting p{e.at(0).get<uint32_t>(), e.at(1).get<uint32_t>()};
        if (p.doc >= index.doc_ids_.size()) {
          throw DataError("posting refers to unknown document");
        }
        list.push_back(p);
      }
    }
    return index;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed index: ") + e.what());
  }
}

void Bm25Index::Save(const std::filesystem::path& path) const {
  WriteTextFile(path, ToJson().dump() + "\n");
}

Bm25Index Bm25Index::Load(const std::filesystem::path& path) {
  try {
    return FromJson(ReadJsonFile(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> MineHardNegatives(const Bm25Index& index,
                                           const Corpus& corpus,
                                           const Question& q, size_t count,
                                           std::span<const std::string> exclude) {
  std::vector<std::string> out;
  if (count == 0) return out;
  std::unordered_set<std::string> skip(exclude.begin(), exclude.end());
  for (const ScoredPassage& hit : index.RankAll(q.tokens)) {
    if (skip.count(hit.id)) continue;
    if (ContainsAnswer(corpus.at(hit.id), q.answers)) continue;
    out.push_back(hit.id);
    if (out.size() == count) break;
  }
  return out;
}

std::vector<std::string> FindCandidateGold(const Bm25Index& index,
                                           const Corpus& corpus,
                                           const Question& q, size_t count) {
  std::vector<std::string> out;
  if (count == 0) return out;
  for (const ScoredPassage& hit : index.RankAll(q.tokens)) {
    if (!ContainsAnswer(corpus.at(hit.id), q.answers)) continue;
    out.push_back(hit.id);
    if (out.size() == count) break;
  }
  return out;
}

std::vector<std::string> CandidateSet::AllIds() const {
  std::vector<std::string> ids;
  ids.reserve(1 + hard_negatives.size() + random_negatives.size());
  ids.push_back(positive);
  ids.insert(ids.end(), hard_negatives.begin(), hard_negatives.end());
  ids.insert(ids.end(), random_negatives.begin(), random_negatives.end());
  return ids;
}

CandidateSet BuildCandidateSet(const Question& q, const std::string& positive,
                               const Bm25Index& index, const Corpus& corpus,
                               Rng& rng) {
  if (corpus.Find(positive) == nullptr) {
    throw DataError("question '" + q.id + "': positive passage '" + positive +
                    "' is not in the corpus");
  }
  if (corpus.size() < 1 + CandidateSet::kHardNegatives +
                          CandidateSet::kRandomNegatives) {
    throw DataError("question '" + q.id +
                    "': corpus too small for a 50-passage candidate set");
  }
  CandidateSet cs;
  cs.question_id = q.id;
  cs.positive = positive;
  const std::string exclude[] = {positive};
  cs.hard_negatives =
      MineHardNegatives(index, corpus, q, CandidateSet::kHardNegatives, exclude);
  if (cs.hard_negatives.size() < CandidateSet::kHardNegatives) {
    throw DataError("question '" + q.id + "': only " +
                    std::to_string(cs.hard_negatives.size()) +
                    " hard negatives could be mined");
  }
  std::unordered_set<std::string> taken(cs.hard_negatives.begin(),
                                        cs.hard_negatives.end());
  taken.insert(positive);
  std::vector<size_t> eligible;
  eligible.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!taken.count(corpus.passages()[i].id)) eligible.push_back(i);
  }
  if (eligible.size() < CandidateSet::kRandomNegatives) {
    throw DataError("question '" + q.id +
                    "': not enough passages left for random negatives");
  }
  for (size_t pick :
       rng.SampleWithoutReplacement(eligible.size(), CandidateSet::kRandomNegatives)) {
    cs.random_negatives.push_back(corpus.passages()[eligible[pick]].id);
  }
  return cs;
}

Json ToJson(const CandidateSet& cs) {
  return Json{{"question_id", cs.question_id},
              {"positive", cs.positive},
              {"hard_negatives", cs.hard_negatives},
              {"random_negatives", cs.random_negatives}};
}

CandidateSet CandidateSetFromJson(const Json& j) {
  CandidateSet cs;
  cs.question_id = j.at("question_id").get<std::string>();
  cs.positive = j.at("positive").get<std::string>();
  cs.hard_negatives = j.at("hard_negatives").get<std::vector<std::string>>();
  cs.random_negatives = j.at("random_negatives").get<std::vector<std::string>>();
  return cs;
}

std::vector<CandidateSet> ReadCandidateSets(const std::filesystem::path& path) {
  std::vector<CandidateSet> out;
  ForEachJsonl(path, [&](const Json& j) { out.push_back(CandidateSetFromJson(j)); });
  return out;
}

void WriteCandidateSets(const std::filesystem::path& path,
                        const std::vector<CandidateSet>& sets) {
  std::vector<Json> records;
  records.reserve(sets.size());
  for (const CandidateSet& cs : sets) records.push_back(ToJson(cs));
  WriteJsonl(path, records);
}

}  // namespace rlab
