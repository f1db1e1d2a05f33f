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
#include <functional>
#include <set>

#include "doctest.h"
#include "rlab/core.h"
#include "rlab/rng.h"

namespace rlab {
namespace {

// Exhaustive edit oracle: breadth-first search over edit scripts on short
// sequences drawn from a tiny alphabet.
int BfsEditDistance(const Tokens& a, const Tokens& b, const Tokens& alphabet) {
  std::set<Tokens> seen = {a};
  std::vector<Tokens> frontier = {a};
  for (int d = 0;; ++d) {
    std::vector<Tokens> next;
    for (const Tokens& s : frontier) {
      if (s == b) return d;
      auto visit = [&](Tokens t) {
        if (t.size() <= std::max(a.size(), b.size()) && seen.insert(t).second) {
          next.push_back(std::move(t));
        }
      };
      for (size_t i = 0; i < s.size(); ++i) {
        Tokens del = s;
        del.erase(del.begin() + static_cast<long>(i));
        visit(del);
        for (const std::string& w : alphabet) {
          Tokens sub = s;
          sub[i] = w;
          visit(sub);
        }
      }
      for (size_t i = 0; i <= s.size(); ++i) {
        for (const std::string& w : alphabet) {
          Tokens ins = s;
          ins.insert(ins.begin() + static_cast<long>(i), w);
          visit(ins);
        }
      }
    }
    frontier = std::move(next);
  }
}

Tokens RandomTokens(Rng& rng, const Tokens& alphabet, size_t max_len) {
  Tokens t(rng.Index(max_len + 1));
  for (std::string& w : t) w = alphabet[rng.Index(alphabet.size())];
  return t;
}

TEST_CASE("tokenize examples") {
  CHECK(Tokenize("Who wrote the music?") == Tokens{"who", "wrote", "the", "music"});
  CHECK(Tokenize("").empty());
  CHECK(Tokenize("Pet Sematary 2") == Tokens{"pet", "sematary", "2"});
  CHECK(Tokenize("  \"Hello,\"   (world)! ") == Tokens{"hello", "world"});
  CHECK(Tokenize("... !!! ").empty());
  CHECK(Tokenize("don't stop") == Tokens{"don't", "stop"});
}

TEST_CASE("tokenize is idempotent") {
  for (const char* text : {"Who wrote the music?", "  New   York. ", "a-b c.d e!"}) {
    Tokens once = Tokenize(text);
    std::string joined;
    for (const std::string& t : once) joined += t + " ";
    CHECK(Tokenize(joined) == once);
  }
}

TEST_CASE("word edit distance examples") {
  CHECK(WordEditDistance(Tokenize("when did australia stop using one cent coins"),
                         Tokenize("when did australia start using one cent coins")) == 1);
  const Tokens s = {"a", "b", "c"};
  CHECK(WordEditDistance(s, s) == 0);
  CHECK(WordEditDistance(Tokens{"a", "b", "c"}, Tokens{"a", "x", "y", "z"}) == 3);
  CHECK(WordEditDistance(Tokens{}, Tokens{"a", "b"}) == 2);
}

TEST_CASE("word edit distance matches exhaustive enumeration") {
  const Tokens alphabet = {"a", "b", "c"};
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Tokens x = RandomTokens(rng, alphabet, 4);
    const Tokens y = RandomTokens(rng, alphabet, 4);
    CHECK(WordEditDistance(x, y) == BfsEditDistance(x, y, alphabet));
  }
}

TEST_CASE("word edit distance is a metric") {
  const Tokens alphabet = {"p", "q", "r", "s"};
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Tokens x = RandomTokens(rng, alphabet, 6);
    const Tokens y = RandomTokens(rng, alphabet, 6);
    const Tokens z = RandomTokens(rng, alphabet, 6);
    const int xy = WordEditDistance(x, y);
    CHECK(xy == WordEditDistance(y, x));
    CHECK((xy == 0) == (x == y));
    CHECK(WordEditDistance(x, z) <= xy + WordEditDistance(y, z));
  }
}

TEST_CASE("normalize answer") {
  CHECK(NormalizeAnswer("The Beatles!") == "beatles");
  CHECK(NormalizeAnswer("1992") == "1992");
  CHECK(NormalizeAnswer("  New   York. ") == "new york");
  CHECK(NormalizeAnswer("An Apple a Day") == "apple day");
  for (const char* s : {"The Beatles!", "  New   York. ", "A.B. the C"}) {
    const std::string once = NormalizeAnswer(s);
    CHECK(NormalizeAnswer(once) == once);
  }
}

TEST_CASE("contains answer") {
  const Passage p = MakePassage("p1", "Opera", "The opera premiered in 1992 in Sydney.");
  CHECK(ContainsAnswer(p, std::vector<std::string>{"1992"}));
  CHECK_FALSE(ContainsAnswer(p, std::vector<std::string>{"Melbourne"}));
  const Passage city = MakePassage("p2", "", "new york city hall");
  CHECK(ContainsAnswer(city, std::vector<std::string>{"The New York"}));
  // Whole-token containment only.
  CHECK_FALSE(ContainsAnswer(MakePassage("p3", "", "newyork city"),
                             std::vector<std::string>{"new york"}));
  CHECK_FALSE(ContainsAnswer(MakePassage("p4", "", "the 19920 mark"),
                             std::vector<std::string>{"1992"}));
}

TEST_CASE("contains answer is monotone under appending") {
  Rng rng(3);
  const Tokens alphabet = {"red", "green", "blue", "the"};
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    for (const std::string& t : RandomTokens(rng, alphabet, 6)) text += t + " ";
    text += "x";
    const std::vector<std::string> answers = {alphabet[rng.Index(3)] + " " +
                                              alphabet[rng.Index(3)]};
    if (!ContainsAnswer(text, answers)) continue;
    CHECK(ContainsAnswer(text + " " + answers[0], answers));
    CHECK(ContainsAnswer(text + " purple", answers));
  }
}

TEST_CASE("question and passage invariants") {
  const Question q = MakeQuestion("q1", "Who wrote it?", {"Me"});
  CHECK(q.tokens == Tokenize(q.text));
  CHECK_THROWS_AS(MakeQuestion("q2", "Who?", {}), InvalidInput);
  CHECK_THROWS_AS(MakePassage("p", "title", ""), InvalidInput);
  const Passage p = MakePassage("p", "Big Title", "body text");
  CHECK(p.tokens == Tokens{"big", "title", "body", "text"});
}

TEST_CASE("corpus and question bank lookups") {
  Corpus corpus({MakePassage("b", "", "two"), MakePassage("a", "", "one")});
  CHECK(corpus.at("a").text == "one");
  CHECK(corpus.Find("zzz") == nullptr);
  CHECK_THROWS(Corpus({MakePassage("a", "", "x"), MakePassage("a", "", "y")}));
  QuestionBank bank;
  bank.Add(MakeQuestion("q", "who", {"x"}));
  CHECK(bank.Contains("q"));
  CHECK_THROWS(bank.Add(MakeQuestion("q", "who", {"x"})));
}

TEST_CASE("filter config validation") {
  FilterConfig cfg;
  CHECK_NOTHROW(cfg.Validate());
  cfg.eps_lexical = 0;
  CHECK_THROWS_AS(cfg.Validate(), InvalidInput);
  cfg.eps_lexical = 3;
  cfg.eps_semantic_cos = 1.5;
  CHECK_THROWS_AS(cfg.Validate(), InvalidInput);
}

}  // namespace
}  // namespace rlab
