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


#include <algorithm>
#include <map>

#include "doctest.h"
#include "rlab/meqfilter.h"
#include "rlab/rng.h"

namespace rlab {
namespace {

Question Q(const std::string& id, const std::string& text, const std::string& answer) {
  return MakeQuestion(id, text, {answer});
}

// Embedder returning a fixed vector per question id; unknown ids get e1.
QuestionEmbedder FixedEmbed(std::map<std::string, Vec> table) {
  return [table = std::move(table)](const Question& q) {
    auto it = table.find(q.id);
    return it == table.end() ? Vec{1, 0, 0, 0, 0} : it->second;
  };
}

const FilterConfig kCfg;

TEST_CASE("quality control") {
  const Question q = Q("q", "how many moons does mars have", "2");
  CHECK_FALSE(QualityControl(q, Q("v", "what many moons does mars have", "x"), kCfg).passed);
  const Question base = Q("b", "who was the king of france", "x");
  const FilterVerdict first =
      QualityControl(base, Q("v", "who was the first king of france", "y"), kCfg);
  CHECK_FALSE(first.passed);
  CHECK_FALSE(first.reason.empty());
  CHECK(first.stage == FilterStage::kQuality);
  CHECK(QualityControl(Q("o", "what is the largest island", "x"),
                       Q("v", "what is the largest inhabited island", "y"), kCfg)
            .passed);
  // A banned word alongside another addition is not "the only added word".
  CHECK(QualityControl(base, Q("v", "who was the first queen king of france", "y"), kCfg)
            .passed);
  // A banned word that substitutes for another word is still the only addition.
  CHECK_FALSE(QualityControl(Q("o", "who was the old king of france", "x"),
                             Q("v", "who was the last king of france", "y"), kCfg)
                  .passed);
}

TEST_CASE("lexical filter bounds and symmetry") {
  const Question q = Q("q", "a b c d e", "x");
  CHECK_FALSE(LexicalFilter(q, Q("v", "a b c d e", "y"), kCfg).passed);
  CHECK(LexicalFilter(q, Q("v", "a b c d z", "y"), kCfg).passed);
  CHECK(LexicalFilter(q, Q("v", "a b x y z", "y"), kCfg).passed);
  CHECK_FALSE(LexicalFilter(q, Q("v", "a w x y z", "y"), kCfg).passed);
  Rng rng(4);
  const Tokens vocab = {"a", "b", "c", "d"};
  for (int i = 0; i < 100; ++i) {
    std::string s1, s2;
    for (size_t k = 0; k < 1 + rng.Index(6); ++k) s1 += vocab[rng.Index(4)] + " ";
    for (size_t k = 0; k < 1 + rng.Index(6); ++k) s2 += vocab[rng.Index(4)] + " ";
    const Question x = Q("x", s1, "1"), y = Q("y", s2, "2");
    CHECK(LexicalFilter(x, y, kCfg).passed == LexicalFilter(y, x, kCfg).passed);
  }
}

TEST_CASE("semantic filter threshold is inclusive") {
  // cos = 19 / 20 exactly.
  CHECK(SemanticFilter(Vec{1, 0, 0, 0, 0}, Vec{19, 6, 1, 1, 1}, kCfg).passed);
  CHECK(SemanticFilter(Vec{1, 2}, Vec{1, 2}, kCfg).passed);
  CHECK_FALSE(SemanticFilter(Vec{1, 0}, Vec{0, 1}, kCfg).passed);
  CHECK_FALSE(SemanticFilter(Vec{1, 0, 0, 0, 0}, Vec{18, 6, 1, 1, 1}, kCfg).passed);
  CHECK_THROWS_AS(SemanticFilter(Vec{0, 0}, Vec{0, 1}, kCfg), InvalidInput);
}

TEST_CASE("paraphrase filter") {
  CHECK_FALSE(ParaphraseFilter(Q("a", "who wrote the anthem", "x"),
                               Q("b", "the anthem who wrote", "x"),
                               ContentMultisetParaphrase)
                  .passed);
  CHECK(ParaphraseFilter(Q("a", "when did australia stop using one cent coins", "x"),
                         Q("b", "when did australia start using one cent coins", "y"),
                         ContentMultisetParaphrase)
            .passed);
  auto never = [](const Question&, const Question&) { return false; };
  CHECK(ParaphraseFilter(Q("a", "x", "1"), Q("b", "x", "1"), never).passed);
}

TEST_CASE("answer difference") {
  CHECK(AnswerDifference(std::vector<std::string>{"1992"},
                         std::vector<std::string>{"1966"}).passed);
  CHECK_FALSE(AnswerDifference(std::vector<std::string>{"The Beatles"},
                               std::vector<std::string>{"beatles"}).passed);
  CHECK_FALSE(AnswerDifference(std::vector<std::string>{"a1", "b2"},
                               std::vector<std::string>{"c3", "B2"}).passed);
  CHECK(AnswerDifference(std::vector<std::string>{"x", "y"},
                         std::vector<std::string>{"z"}).passed);
}

TEST_CASE("evaluate candidate short-circuits and labels") {
  const Question q = Q("q", "who wrote the song", "ann");
  const QuestionPair identical = EvaluateCandidate(q, Q("v", "who wrote the song", "bob"),
                                                   kCfg, ContentMultisetParaphrase,
                                                   FixedEmbed({}));
  CHECK(identical.relation == Relation::kCandidate);
  REQUIRE(identical.filter_report.size() == 2);
  CHECK(identical.filter_report[1].stage == FilterStage::kLexical);
  CHECK_FALSE(identical.semantic_similarity.has_value());

  const QuestionPair ok = EvaluateCandidate(q, Q("v", "who sang the song", "bob"), kCfg,
                                            ContentMultisetParaphrase, FixedEmbed({}));
  CHECK(ok.relation == Relation::kMeq);
  CHECK(ok.filter_report.size() == 5);
  CHECK(ok.edit_distance == 1);
  CHECK(ok.semantic_similarity.value() == 1.0);
}

TEST_CASE("filter candidates selection rule") {
  const Question q = Q("q", "who wrote the song", "ann");
  const QuestionEmbedder embed = FixedEmbed({});
  SUBCASE("all fail") {
    const std::vector<MeqCandidate> cands = {{Q("c0", "who wrote the song", "bob"), 3},
                                             {Q("c1", "what wrote the song", "bob"), 2}};
    const FilterOutcome out = FilterCandidates(q, cands, kCfg, ContentMultisetParaphrase, embed);
    CHECK_FALSE(out.selected.has_value());
    CHECK(out.reports.size() == 2);
  }
  SUBCASE("single survivor wins regardless of frequency") {
    const std::vector<MeqCandidate> cands = {{Q("c0", "who wrote the song", "bob"), 9},
                                             {Q("c1", "who sang the song", "bob"), 1}};
    CHECK(FilterCandidates(q, cands, kCfg, ContentMultisetParaphrase, embed).selected == 1u);
  }
  SUBCASE("frequency then edit distance then text") {
    const std::vector<MeqCandidate> cands = {
        {Q("c0", "who sang the song", "bob"), 3},                // d=1
        {Q("c1", "who sang the sad tune", "cy"), 5},             // d=3
        {Q("c2", "who sang the song later", "dee"), 5}};         // d=2
    CHECK(FilterCandidates(q, cands, kCfg, ContentMultisetParaphrase, embed).selected == 2u);
    const std::vector<MeqCandidate> text_tie = {{Q("c0", "who sang the song", "bob"), 2},
                                                {Q("c1", "who hummed the song", "cy"), 2}};
    CHECK(FilterCandidates(q, text_tie, kCfg, ContentMultisetParaphrase, embed).selected ==
          1u);
  }
  SUBCASE("frequency below one is rejected") {
    const std::vector<MeqCandidate> cands = {{Q("c0", "who sang the song", "bob"), 0}};
    CHECK_THROWS_AS(FilterCandidates(q, cands, kCfg, ContentMultisetParaphrase, embed),
                    InvalidInput);
  }
}

TEST_CASE("survivors do not depend on stage order") {
  Rng rng(12);
  const Tokens words = {"who", "what", "wrote", "sang", "the", "first", "song",
                        "tune", "not", "big"};
  const Question q = Q("q", "who wrote the song", "ann");
  std::map<std::string, Vec> vectors;
  std::vector<Question> cands;
  for (int i = 0; i < 150; ++i) {
    std::string text;
    for (size_t k = 0; k < 2 + rng.Index(4); ++k) text += words[rng.Index(words.size())] + " ";
    const std::string id = "c" + std::to_string(i);
    const std::string answer = rng.Index(3) == 0 ? "ann" : "bob";
    cands.push_back(Q(id, text, answer));
    vectors[id] = {1.0, rng.Uniform() * 0.6, 0, 0, 0};
  }
  const QuestionEmbedder embed = FixedEmbed(vectors);
  StageOrder order = kDefaultStageOrder;
  std::sort(order.begin(), order.end());
  std::vector<bool> reference;
  for (const Question& c : cands) {
    const QuestionPair p = EvaluateCandidate(q, c, kCfg, ContentMultisetParaphrase, embed);
    reference.push_back(p.relation == Relation::kMeq);
  }
  int permutations = 0;
  do {
    for (size_t i = 0; i < cands.size(); ++i) {
      const QuestionPair p =
          EvaluateCandidate(q, cands[i], kCfg, ContentMultisetParaphrase, embed, order);
      CHECK((p.relation == Relation::kMeq) == reference[i]);
    }
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(permutations == 120);
  CHECK(std::count(reference.begin(), reference.end(), true) > 0);
}

TEST_CASE("selected MEQ passes every stage when re-run") {
  const Question q = Q("q", "who wrote the song", "ann");
  const std::vector<MeqCandidate> cands = {{Q("c0", "who sang the song", "bob"), 2},
                                           {Q("c1", "who wrote the tune", "cy"), 4}};
  const QuestionEmbedder embed = FixedEmbed({});
  const FilterOutcome out = FilterCandidates(q, cands, kCfg, ContentMultisetParaphrase, embed);
  REQUIRE(out.selected.has_value());
  const QuestionPair again = EvaluateCandidate(q, cands[*out.selected].question, kCfg,
                                               ContentMultisetParaphrase, embed);
  CHECK(again.relation == Relation::kMeq);
  for (const FilterVerdict& v : again.filter_report) CHECK(v.passed);
}

}  // namespace
}  // namespace rlab
