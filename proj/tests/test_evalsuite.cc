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


#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.h"
#include "oracles.h"
#include "rlab/evalsuite.h"

namespace rlab {
namespace {

namespace fs = std::filesystem;

// Model whose single-token inputs map to planted pre-activation vectors:
// projection is the identity and bias zero, so E(token) = tanh(row).
DualEncoder PlantedModel(const std::map<std::string, Vec>& question_rows,
                         const std::map<std::string, Vec>& passage_rows) {
  EncoderConfig cfg{4096, 2, 0};
  DualEncoder model(cfg);
  for (Side side : {Side::kQuestion, Side::kPassage}) {
    Tower& t = model.tower(side);
    t.SetZero();
    t.projection = {1, 0, 0, 1};
    std::set<size_t> used;
    for (const auto& [token, row] : side == Side::kQuestion ? question_rows : passage_rows) {
      const size_t b = TokenBucket(token, cfg.hash_buckets);
      REQUIRE(used.insert(b).second);
      std::copy(row.begin(), row.end(), t.Row(b).begin());
    }
  }
  return model;
}

std::map<std::string, double> ScoresFor(const DualEncoder& model, const Question& q,
                                        const Corpus& corpus,
                                        const std::vector<std::string>& ids) {
  const Vec vq = model.EncodeQuestion(q);
  std::map<std::string, double> scores;
  for (const std::string& id : ids) {
    scores[id] = oracle::Dot(vq, model.EncodePassage(corpus.at(id)));
  }
  return scores;
}

TEST_CASE("summarize ranks") {
  RankingResult r = SummarizeRanks({1, 1, 1});
  CHECK(r.mean_rank == 1.0);
  CHECK(r.mrr == 1.0);
  r = SummarizeRanks({1, 2, 4});
  CHECK(r.mrr == doctest::Approx(0.583333).epsilon(1e-6));
  CHECK(r.mean_rank == doctest::Approx(7.0 / 3).epsilon(1e-12));
  r = SummarizeRanks({7});
  CHECK(r.mean_rank == 7.0);
  CHECK(r.mrr == doctest::Approx(1.0 / 7));
}

TEST_CASE("ranking ties go to the smaller id") {
  const PreparedWorld& w = fixture::TinyWorld();
  DualEncoder flat(EncoderConfig{64, 4, 0});
  flat.tower(Side::kQuestion).SetZero();
  flat.tower(Side::kPassage).SetZero();
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(flat, w.world.corpus);
  for (const CandidateSet& cs : w.test_sets) {
    std::vector<std::string> ids = cs.AllIds();
    const int smaller = static_cast<int>(
        std::count_if(ids.begin(), ids.end(), [&](const std::string& id) { return id < cs.positive; }));
    CHECK(RankCandidates(flat, w.world.questions.at(cs.question_id), cs, passages) ==
          1 + smaller);
  }
  // Positive with the smallest id wins an all-way tie.
  CandidateSet cs = w.test_sets[0];
  std::vector<std::string> ids = cs.AllIds();
  std::sort(ids.begin(), ids.end());
  cs.positive = ids[0];
  cs.hard_negatives.assign(ids.begin() + 1, ids.begin() + 31);
  cs.random_negatives.assign(ids.begin() + 31, ids.end());
  CHECK(RankCandidates(flat, w.world.questions.at(cs.question_id), cs, passages) == 1);
}

TEST_CASE("ranks and MRR agree with a sorting oracle on 100 instances") {
  const PreparedWorld& w = fixture::TinyWorld();
  std::vector<const CandidateSet*> sets;
  for (const auto* group : {&w.dev_sets, &w.test_sets, &w.contrast_sets}) {
    for (const CandidateSet& cs : *group) sets.push_back(&cs);
  }
  REQUIRE(sets.size() >= 90);
  int instances = 0;
  for (uint64_t seed = 0; instances < 100; ++seed) {
    DualEncoder model(EncoderConfig{512, 6, seed});
    const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, w.world.corpus);
    std::vector<CandidateSet> batch;
    std::vector<int> oracle_ranks;
    for (size_t i = seed % 7; i < sets.size() && instances < 100; i += 9, ++instances) {
      const CandidateSet& cs = *sets[i];
      const Question& q = w.world.questions.at(cs.question_id);
      const int want = oracle::Rank(ScoresFor(model, q, w.world.corpus, cs.AllIds()), cs.positive);
      CHECK(RankCandidates(model, q, cs, passages) == want);
      CHECK(want >= 1);
      CHECK(want <= 50);
      batch.push_back(cs);
      oracle_ranks.push_back(want);
    }
    const RankingResult r = RankingEval(model, w.world.questions, batch, passages);
    double inv = 0.0;
    for (int rank : oracle_ranks) inv += 1.0 / rank;
    CHECK(r.mrr == doctest::Approx(inv / oracle_ranks.size()).epsilon(1e-12));
    CHECK(r.mrr > 0.0);
    CHECK(r.mrr <= 1.0);
    CHECK(r.mean_rank >= 1.0);
  }
}

TEST_CASE("dense retrieval equals a linear scan") {
  const PreparedWorld& w = fixture::TinyWorld();
  const Corpus& corpus = w.world.corpus;
  DualEncoder model(EncoderConfig{512, 8, 3});
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  std::vector<std::string> all_ids;
  for (const Passage& p : corpus.passages()) all_ids.push_back(p.id);
  for (size_t i = 0; i < 10; ++i) {
    const Question& q = w.world.questions.at(w.test_sets[i].question_id);
    const auto scores = ScoresFor(model, q, corpus, all_ids);
    std::vector<std::pair<double, std::string>> order;
    for (const auto& [id, s] : scores) order.push_back({-s, id});
    std::sort(order.begin(), order.end());
    for (size_t k : {1, 5, 20}) {
      const auto got = DenseRetrieve(model, passages, q, k);
      REQUIRE(got.size() == k);
      for (size_t r = 0; r < k; ++r) CHECK(got[r].id == order[r].second);
    }
    // k = corpus size gives a permutation.
    const auto everything = DenseRetrieve(model, passages, q, all_ids.size() + 10);
    std::set<std::string> ids;
    for (const ScoredPassage& p : everything) ids.insert(p.id);
    CHECK(ids.size() == all_ids.size());
  }
}

TEST_CASE("duplicated passages sit next to each other") {
  const PreparedWorld& w = fixture::TinyWorld();
  std::vector<Passage> ps = w.world.corpus.passages();
  const Passage copy = ps[17];
  ps.push_back(MakePassage("zz-copy", copy.title, copy.text));
  const Corpus corpus(ps);
  DualEncoder model(EncoderConfig{512, 8, 4});
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  const Question& q = w.world.questions.at(w.test_sets[0].question_id);
  const auto ranked = DenseRetrieve(model, passages, q, ps.size());
  for (size_t r = 0; r < ranked.size(); ++r) {
    if (ranked[r].id == copy.id) {
      REQUIRE(r + 1 < ranked.size());
      CHECK(ranked[r + 1].id == "zz-copy");
    }
  }
}

TEST_CASE("stale corpus embeddings are rejected") {
  const PreparedWorld& w = fixture::TinyWorld();
  DualEncoder model(EncoderConfig{128, 4, 1});
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, w.world.corpus);
  const Question& q = w.world.questions.at(w.test_sets[0].question_id);
  CHECK_NOTHROW(DenseRetrieve(model, passages, q, 3));
  model.tower(Side::kPassage).bias[0] += 1e-9;
  CHECK_THROWS_AS(DenseRetrieve(model, passages, q, 3), CacheError);
  CHECK_THROWS_AS(RankingEval(model, w.world.questions, w.test_sets, passages), CacheError);
}

TEST_CASE("recall matches an oracle and grows with k") {
  const PreparedWorld& w = fixture::TinyWorld();
  const Corpus& corpus = w.world.corpus;
  std::vector<std::string> all_ids;
  for (const Passage& p : corpus.passages()) all_ids.push_back(p.id);
  std::vector<Question> questions;
  for (size_t i = 0; i < 10; ++i) {
    questions.push_back(w.world.questions.at(w.test_sets[i].question_id));
  }
  const std::vector<int> ks = {1, 5, 20, 100};
  for (uint64_t seed : {1, 2, 3}) {
    DualEncoder model(EncoderConfig{512, 8, seed});
    const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
    const RetrievalResult r = RetrievalEval(model, corpus, passages, questions, ks);
    for (size_t ki = 0; ki < ks.size(); ++ki) {
      int hits = 0;
      for (const Question& q : questions) {
        bool hit = false;
        for (const std::string& id :
             oracle::TopK(ScoresFor(model, q, corpus, all_ids), static_cast<size_t>(ks[ki]))) {
          hit = hit || ContainsAnswer(corpus.at(id), q.answers);
        }
        hits += hit ? 1 : 0;
      }
      CHECK(r.recall[ki] == doctest::Approx(hits / 10.0));
      if (ki > 0) CHECK(r.recall[ki] >= r.recall[ki - 1]);
    }
  }
  // An answer found nowhere gives zero recall.
  Question impossible = MakeQuestion("nowhere", "who built it", {"qwertyuiop"});
  DualEncoder model(EncoderConfig{512, 8, 1});
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  const std::vector<Question> one = {impossible};
  for (double v : RetrievalEval(model, corpus, passages, one, ks).recall) CHECK(v == 0.0);
  CHECK_THROWS_AS(RetrievalEval(model, corpus, passages, one, std::vector<int>{5, 1}),
                  InvalidInput);
}

TEST_CASE("recall saturates when every top passage has the answer") {
  std::vector<Passage> ps;
  for (int i = 0; i < 6; ++i) {
    ps.push_back(MakePassage("p" + std::to_string(i), "t", "the answer is paris"));
  }
  const Corpus corpus(ps);
  DualEncoder model(EncoderConfig{64, 4, 0});
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  const std::vector<Question> qs = {MakeQuestion("q", "capital of france", {"Paris"})};
  CHECK(RetrievalEval(model, corpus, passages, qs, std::vector<int>{1}).recall[0] == 1.0);
}

TEST_CASE("passage overlap with planted geometry") {
  // Question axes: "qa" looks along x, "qb" along y.
  std::map<std::string, Vec> qrows = {{"qa", {3, 0}}, {"qb", {0, 3}}, {"qc", {3, 0.01}}};
  std::map<std::string, Vec> prows = {
      {"shared1", {1.0, 1.0}}, {"shared2", {0.9, 0.9}}, {"shared3", {0.8, 0.8}},
      {"xonly1", {0.7, -1}},   {"xonly2", {0.6, -1}},   {"yonly1", {-1, 0.7}},
      {"yonly2", {-1, 0.6}},   {"far1", {-2, -2}},      {"far2", {-2.5, -2.5}}};
  const DualEncoder model = PlantedModel(qrows, prows);
  std::vector<Passage> ps;
  for (const auto& [token, row] : prows) ps.push_back(MakePassage(token, "", token));
  const Corpus corpus(ps);
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, corpus);
  const Question qa = MakeQuestion("a", "qa", {"x"});
  const Question qb = MakeQuestion("b", "qb", {"x"});
  const Question qc = MakeQuestion("c", "qc", {"x"});
  CHECK(PairOverlap(model, passages, qa, qb, 5) == doctest::Approx(0.6));
  CHECK(PairOverlap(model, passages, qb, qa, 5) == PairOverlap(model, passages, qa, qb, 5));
  CHECK(PairOverlap(model, passages, qa, qa, 5) == 1.0);
  CHECK(PairOverlap(model, passages, qa, qc, 5) == 1.0);
  CHECK(PairOverlap(model, passages, qa, qb, 2) == 1.0);

  // Disjoint top sets.
  std::vector<Passage> split;
  for (const char* id : {"xonly1", "xonly2", "yonly1", "yonly2"}) {
    split.push_back(MakePassage(id, "", id));
  }
  const Corpus split_corpus(split);
  const CorpusEmbeddings split_passages = CorpusEmbeddings::Build(model, split_corpus);
  CHECK(PairOverlap(model, split_passages, qa, qb, 2) == 0.0);

  // Aggregate over pairs, and ignore passages far outside both top sets.
  QuestionBank bank;
  bank.Add(qa);
  bank.Add(qb);
  bank.Add(qc);
  const std::vector<QuestionPair> pairs = {{"a", "b", Relation::kMeq},
                                           {"a", "c", Relation::kMeq}};
  CHECK(PassageOverlap(model, pairs, bank, passages, 5) == doctest::Approx(0.8));
  std::vector<Passage> trimmed;
  for (const Passage& p : ps) {
    if (p.id.rfind("far", 0) != 0) trimmed.push_back(p);
  }
  const Corpus trimmed_corpus(trimmed);
  CHECK(PassageOverlap(model, pairs, bank, CorpusEmbeddings::Build(model, trimmed_corpus), 5) ==
        doctest::Approx(0.8));
}

TEST_CASE("overlap is symmetric on generated pairs") {
  const PreparedWorld& w = fixture::TinyWorld();
  DualEncoder model(EncoderConfig{512, 8, 6});
  const CorpusEmbeddings passages = CorpusEmbeddings::Build(model, w.world.corpus);
  for (const QuestionPair& p : w.world.contrast_pairs) {
    const Question& a = w.world.questions.at(p.original_id);
    const Question& b = w.world.questions.at(p.variant_id);
    const double ab = PairOverlap(model, passages, a, b, 5);
    CHECK(ab == PairOverlap(model, passages, b, a, 5));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("identification with planted geometry") {
  std::map<std::string, Vec> qrows = {{"q1", {2, 0}},    {"close", {1.5, 0.2}},
                                      {"far", {0.1, 2}}, {"mid", {1.0, 1.0}},
                                      {"neg", {-2, 0}},  {"q2", {0, 2}}};
  const DualEncoder model = PlantedModel(qrows, {});
  QuestionBank bank;
  for (const auto& [token, row] : qrows) bank.Add(MakeQuestion(token, token, {"x"}));
  // Every ordered triple of distinct tokens, checked against tanh-space dot products.
  std::vector<EvalTriple> triples;
  int expected = 0;
  auto encode = [&](const std::string& token) {
    Vec v = qrows.at(token);
    for (double& x : v) x = std::tanh(x);
    return v;
  };
  for (const auto& [a, ra] : qrows) {
    for (const auto& [b, rb] : qrows) {
      for (const auto& [c, rc] : qrows) {
        if (a == b || a == c || b == c) continue;
        triples.push_back({a, b, c});
        const bool ok = oracle::Dot(encode(a), encode(b)) > oracle::Dot(encode(a), encode(c));
        expected += ok ? 1 : 0;
        CHECK(IdentifiesMeq(model, bank.at(a), bank.at(b), bank.at(c)) == ok);
      }
    }
  }
  CHECK(IdentificationRate(model, triples, bank) ==
        doctest::Approx(static_cast<double>(expected) / triples.size()));
  // Same text on both sides is a tie, which fails.
  CHECK_FALSE(IdentifiesMeq(model, bank.at("q1"), bank.at("mid"), bank.at("mid")));
  // A question is its own best paraphrase here.
  CHECK(IdentifiesMeq(model, bank.at("q1"), bank.at("q1"), bank.at("far")));
}

TEST_CASE("metric records and table") {
  const Json rec = MetricRecord("recall", 0.5, 5, "test", "run/selected.ckpt");
  CHECK(rec["metric"] == "recall");
  CHECK(rec["k"] == 5);
  CHECK(MetricRecord("mrr", 0.25, std::nullopt, "dev", "c")["k"].is_null());
  const std::string table =
      FormatMetricTable({rec, MetricRecord("identification_rate", 0.875, std::nullopt, "", "c")});
  CHECK(table.find("identification_rate") != std::string::npos);
  CHECK(table.find("0.875") != std::string::npos);
  // Columns line up.
  std::vector<size_t> value_cols;
  std::istringstream lines(table);
  std::string line;
  while (std::getline(lines, line)) {
    const size_t pos = line.find("0.");
    if (pos != std::string::npos) value_cols.push_back(pos);
  }
  REQUIRE(value_cols.size() == 2);
  CHECK(value_cols[0] == value_cols[1]);
}

TEST_CASE("triples round trip") {
  const PreparedWorld& w = fixture::TinyWorld();
  const fs::path path = fs::temp_directory_path() / "rlab_triples.jsonl";
  WriteTriples(path, w.world.triples);
  const auto back = ReadTriples(path);
  REQUIRE(back.size() == w.world.triples.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].q_id == w.world.triples[i].q_id);
    CHECK(back[i].meq_id == w.world.triples[i].meq_id);
  }
  fs::remove(path);
}

}  // namespace
}  // namespace rlab
