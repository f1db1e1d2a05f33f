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


#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "rlab/meqfilter.h"
#include "rlab/synthgen.h"

namespace rlab {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool Disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return AnswerDifference(a, b).passed;
}

const World& Tiny() { return fixture::TinyWorld().world; }

TEST_CASE("world generation is a pure function of the config") {
  const fs::path a = fs::temp_directory_path() / "rlab_world_a";
  const fs::path b = fs::temp_directory_path() / "rlab_world_b";
  fs::remove_all(a);
  fs::remove_all(b);
  fs::create_directories(a);
  fs::create_directories(b);
  const std::vector<std::string> files = WriteWorld(GenerateWorld(fixture::TinyWorldConfig()), a);
  WriteWorld(GenerateWorld(fixture::TinyWorldConfig()), b);
  CHECK(files.size() == 10);
  for (const std::string& f : files) {
    CAPTURE(f);
    CHECK(!Slurp(a / f).empty());
    CHECK(Slurp(a / f) == Slurp(b / f));
  }
  // A different seed changes the world.
  const World other = GenerateWorld(fixture::TinyWorldConfig(6));
  CHECK(other.corpus.passages()[0].text != Tiny().corpus.passages()[0].text);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("world sizes follow the config") {
  const World& w = Tiny();
  const WorldConfig cfg = fixture::TinyWorldConfig();
  CHECK(w.corpus.size() == static_cast<size_t>(cfg.n_passages));
  CHECK(w.train.size() == static_cast<size_t>(cfg.n_train_questions));
  CHECK(w.contrast.size() == static_cast<size_t>(cfg.n_contrast_questions));
  CHECK(w.dev.size() == static_cast<size_t>(cfg.n_dev_questions));
  CHECK(w.test.size() == static_cast<size_t>(cfg.n_test_questions));
  CHECK(w.contrast_pairs.size() == w.contrast.size());
  CHECK_FALSE(w.triples.empty());
}

TEST_CASE("every gold passage contains the answer") {
  const World& w = Tiny();
  size_t checked = 0;
  for (const auto& [qid, pid] : w.gold) {
    CAPTURE(qid);
    CHECK(ContainsAnswer(w.corpus.at(pid), w.questions.at(qid).answers));
    ++checked;
  }
  CHECK(checked >= w.train.size() + w.dev.size() + w.test.size());
  for (const auto* split : {&w.train, &w.dev, &w.test, &w.contrast}) {
    for (const TrainingExample& e : *split) {
      CHECK(w.gold.at(e.question_id) == e.positive);
      for (const std::string& n : e.hard_negatives) {
        CHECK(n != e.positive);
        CHECK_FALSE(ContainsAnswer(w.corpus.at(n), w.questions.at(e.question_id).answers));
      }
    }
  }
}

TEST_CASE("contrast pairs pass the filter and point at a different passage") {
  const World& w = Tiny();
  const FilterConfig cfg;
  for (const QuestionPair& p : w.contrast_pairs) {
    const Question& q = w.questions.at(p.original_id);
    const Question& m = w.questions.at(p.variant_id);
    CAPTURE(q.text);
    CAPTURE(m.text);
    CHECK(p.relation == Relation::kMeq);
    CHECK(w.gold.at(q.id) != w.gold.at(m.id));
    CHECK(QualityControl(q, m, cfg).passed);
    CHECK(LexicalFilter(q, m, cfg).passed);
    const int d = WordEditDistance(q.tokens, m.tokens);
    CHECK(d >= 1);
    CHECK(d <= 3);
    CHECK(ParaphraseFilter(q, m, ContentMultisetParaphrase).passed);
    CHECK(Disjoint(q.answers, m.answers));
  }
}

TEST_CASE("pools hold sound labels") {
  const World& w = Tiny();
  const FilterConfig cfg;
  size_t paraphrases = 0, meqs = 0;
  for (const auto& [qid, pool] : w.pools) {
    const Question& q = w.questions.at(qid);
    for (const std::string& pid : pool.paraphrases) {
      const Question& p = w.questions.at(pid);
      CHECK(WordEditDistance(q.tokens, p.tokens) >= 1);
      CHECK(SynonymAwareParaphrase(q, p));
      CHECK(p.answers == q.answers);
      ++paraphrases;
    }
    for (const MeqAugmentation& m : pool.meqs) {
      const Question& mq = w.questions.at(m.question_id);
      CHECK(QualityControl(q, mq, cfg).passed);
      CHECK(LexicalFilter(q, mq, cfg).passed);
      CHECK(Disjoint(q.answers, mq.answers));
      CHECK(ContainsAnswer(w.corpus.at(m.positive), mq.answers));
      CHECK(m.positive != w.gold.at(qid));
      for (const std::string& n : m.hard_negatives) CHECK(n != m.positive);
      ++meqs;
    }
  }
  CHECK(paraphrases > 0);
  CHECK(meqs > 0);
  CHECK(w.self_check.meq_pairs > 0);
  CHECK(w.self_check.semantic_pass_rate() >= 0.0);
  CHECK(w.self_check.semantic_pass_rate() <= 1.0);
}

TEST_CASE("evaluation triples are label sound") {
  const World& w = Tiny();
  for (const EvalTriple& t : w.triples) {
    const Question& q = w.questions.at(t.q_id);
    CHECK(w.questions.at(t.para_id).answers == q.answers);
    CHECK(Disjoint(q.answers, w.questions.at(t.meq_id).answers));
  }
}

TEST_CASE("reorder-only paraphrases satisfy the default detector") {
  const World& w = Tiny();
  Rng rng(77);
  int produced = 0;
  for (size_t i = 0; produced < 100 && i < 10 * w.train.size(); ++i) {
    const Question& q = w.questions.at(w.train[i % w.train.size()].question_id);
    auto p = GenerateParaphrase(q, rng, "r" + std::to_string(i), false, true);
    if (!p) continue;
    ++produced;
    CAPTURE(q.text);
    CAPTURE(p->text);
    CHECK(ContentMultisetParaphrase(q, *p));
    CHECK(WordEditDistance(q.tokens, p->tokens) >= 1);
    CHECK(p->answers == q.answers);
  }
  CHECK(produced == 100);
}

TEST_CASE("synonym paraphrases keep the answer") {
  const World& w = Tiny();
  Rng rng(78);
  int produced = 0;
  for (const TrainingExample& e : w.train) {
    const Question& q = w.questions.at(e.question_id);
    auto p = GenerateParaphrase(q, rng, "s" + e.question_id, true, false);
    if (!p) continue;
    ++produced;
    CHECK(p->answers == q.answers);
    CHECK(WordEditDistance(q.tokens, p->tokens) >= 1);
    CHECK(SynonymAwareParaphrase(q, *p));
    CHECK(ParseQuestionKey(*p, w) == ParseQuestionKey(q, w));
  }
  CHECK(produced > 0);
  const Question odd = MakeQuestion("odd", "xyzzy plugh", {"a"});
  CHECK_FALSE(GenerateParaphrase(odd, rng, "o").has_value());
}

TEST_CASE("generated minimal edits swap one slot") {
  const World& w = Tiny();
  Rng rng(79);
  int produced = 0;
  std::set<Slot> slots;
  for (const TrainingExample& e : w.train) {
    const Question& q = w.questions.at(e.question_id);
    auto m = GenerateMeq(q, w, rng, "m" + e.question_id);
    if (!m) continue;
    ++produced;
    slots.insert(m->slot);
    const int d = WordEditDistance(q.tokens, m->question.tokens);
    CHECK(d >= 1);
    CHECK(d <= 3);
    CHECK(Disjoint(q.answers, m->question.answers));
    auto key = ParseQuestionKey(m->question, w);
    REQUIRE(key.has_value());
    const Fact* sibling = w.FindFact(*key);
    REQUIRE(sibling != nullptr);
    CHECK(sibling->passage_id == m->gold_passage);
    CHECK(ContainsAnswer(w.corpus.at(m->gold_passage), m->question.answers));
    // Exactly one of entity, attribute, year moved.
    auto orig = ParseQuestionKey(q, w);
    REQUIRE(orig.has_value());
    const int moved = (orig->entity != key->entity) + (orig->attribute != key->attribute) +
                      (orig->year != key->year);
    CHECK(moved == 1);
  }
  CHECK(produced > 0);
  CHECK(slots.size() == 3);
}

TEST_CASE("infeasible configs are rejected") {
  WorldConfig cfg;
  cfg.n_passages = 2400;  // fewer than the facts it must hold
  CHECK_THROWS_AS(GenerateWorld(cfg), GenerationError);
  WorldConfig bad = fixture::TinyWorldConfig();
  bad.meqs_per_question = 0;
  CHECK_THROWS_AS(bad.Validate(), InvalidInput);
  bad = fixture::TinyWorldConfig();
  bad.n_contrast_questions = bad.n_train_questions + 1;
  CHECK_THROWS(bad.Validate());
}

}  // namespace
}  // namespace rlab
