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

#include "rlab/synthgen.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "rlab/lexindex.h"

namespace rlab {
namespace {

struct Attribute {
  const char* verb;
  std::array<const char*, 2> synonyms;
};

constexpr std::array<Attribute, kMaxAttributes> kAttributes = {{
    {"founded", {"established", "started"}},
    {"coached", {"trained", "mentored"}},
    {"owned", {"held", "controlled"}},
    {"sponsored", {"funded", "backed"}},
    {"designed", {"planned", "drafted"}},
    {"led", {"headed", "directed"}},
    {"managed", {"ran", "supervised"}},
    {"renovated", {"restored", "rebuilt"}},
    {"promoted", {"advertised", "publicized"}},
    {"audited", {"inspected", "reviewed"}},
    {"recorded", {"taped", "captured"}},
    {"hosted", {"presented", "emceed"}},
}};

constexpr std::array<const char*, 12> kEntityTypes = {
    "club",   "band",    "museum",  "festival", "company", "league",
    "theater", "academy", "orchestra", "studio", "gallery", "choir"};

constexpr int kFirstYear = 1950;
constexpr int kMaxYears = 70;

// Template words of questions and passages; pseudo-words never collide
// with these.
const std::set<std::string>& ReservedWords() {
  static const std::set<std::string> words = [] {
    std::set<std::string> w = {"who",   "the",   "in",     "is",    "well",    "known",
                               "for",   "it",    "was",    "by",    "records",
                               "from",  "mention", "of",   "plans", "were",
                               "discussed", "archive", "notes", "about"};
    for (const Attribute& a : kAttributes) {
      w.insert(a.verb);
      for (const char* s : a.synonyms) w.insert(s);
    }
    for (const char* t : kEntityTypes) w.insert(t);
    for (const std::string& s : DefaultStopwords()) w.insert(s);
    for (const std::string& s : FilterConfig().question_words) w.insert(s);
    for (const std::string& s : FilterConfig().banned_added_words) w.insert(s);
    return w;
  }();
  return words;
}

// verb or synonym -> attribute index
const std::unordered_map<std::string, int>& VerbTable() {
  static const std::unordered_map<std::string, int> table = [] {
    std::unordered_map<std::string, int> t;
    for (int i = 0; i < kMaxAttributes; ++i) {
      t.emplace(kAttributes[i].verb, i);
      for (const char* s : kAttributes[i].synonyms) t.emplace(s, i);
    }
    return t;
  }();
  return table;
}

std::vector<std::string> MakeVocabulary(int size, Rng& rng) {
  static const std::string consonants = "bdfgklmnprstvz";
  static const std::string vowels = "aeiou";
  static const std::string codas = "nrsl";
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (static_cast<int>(words.size()) < size) {
    const int syllables = 2 + static_cast<int>(rng.Index(2));
    std::string w;
    for (int s = 0; s < syllables; ++s) {
      w += consonants[rng.Index(consonants.size())];
      w += vowels[rng.Index(vowels.size())];
    }
    if (rng.Index(3) == 0) w += codas[rng.Index(codas.size())];
    if (ReservedWords().count(w) || !seen.insert(w).second) continue;
    words.push_back(std::move(w));
  }
  return words;
}

std::string YearToken(int year_index) { return std::to_string(kFirstYear + year_index); }

std::string Join(const Tokens& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string QuestionText(const Tokens& tokens) { return Join(tokens) + "?"; }

std::string Numbered(const char* prefix, int a, int b = -1) {
  char buf[64];
  if (b < 0) {
    std::snprintf(buf, sizeof(buf), "%s-%05d", prefix, a);
  } else {
    std::snprintf(buf, sizeof(buf), "%s-%05d-%d", prefix, a, b);
  }
  return buf;
}

// Index of the token equal to the year/name/verb of the key, or npos.
size_t FindToken(const Tokens& tokens, const std::string& needle) {
  auto it = std::find(tokens.begin(), tokens.end(), needle);
  return it == tokens.end() ? std::string::npos
                            : static_cast<size_t>(it - tokens.begin());
}

size_t FindVerb(const Tokens& tokens) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (VerbTable().count(tokens[i])) return i;
  }
  return std::string::npos;
}

class WorldBuilder {
 public:
  explicit WorldBuilder(const WorldConfig& cfg) : rng_(DeriveSeed(cfg.seed, 0x5eed)) {
    world_.config = cfg;
  }

  World Build();

 private:
  std::string FreshAnswer();
  size_t AddFact(const FactKey& key, FactRole role);
  std::optional<FactKey> RandomFreeKey();
  std::optional<FactKey> FreeSibling(const FactKey& key, Slot* slot);
  Tokens QuestionTokens(const FactKey& key, bool use_synonym);
  Tokens Filler(int n);
  Passage FactPassage(const Fact& f, const std::string& id);
  Passage DistractorPassage(const FactKey& key, const std::string& id);
  Question MeqFrom(const Question& q, const FactKey& from, const FactKey& to,
                   std::string id);
  void SelfCheckMeq(const Question& q, const Question& meq,
                    const DualEncoder& probe);
  void SelfCheckParaphrase(const Question& q, const Question& para);

  World world_;
  Rng rng_;
  std::vector<std::string> name_words_;
  std::vector<std::string> filler_words_;
  std::set<std::string> used_answers_;
  std::vector<std::vector<int>> entities_by_type_;
};

std::string WorldBuilder::FreshAnswer() {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::string answer = name_words_[rng_.Index(name_words_.size())] + " " +
                         name_words_[rng_.Index(name_words_.size())];
    if (used_answers_.insert(answer).second) return answer;
  }
  throw GenerationError("ran out of unique answers; increase vocab_size");
}

size_t WorldBuilder::AddFact(const FactKey& key, FactRole role) {
  Fact f;
  f.key = key;
  f.answer = FreshAnswer();
  f.role = role;
  world_.fact_index.emplace(key, world_.facts.size());
  world_.facts.push_back(std::move(f));
  return world_.facts.size() - 1;
}

std::optional<FactKey> WorldBuilder::RandomFreeKey() {
  const WorldConfig& c = world_.config;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    FactKey key{static_cast<int>(rng_.Index(c.n_entities)),
                static_cast<int>(rng_.Index(c.n_attributes)),
                static_cast<int>(rng_.Index(c.n_years))};
    if (!world_.fact_index.count(key)) return key;
  }
  return std::nullopt;
}

std::optional<FactKey> WorldBuilder::FreeSibling(const FactKey& key, Slot* slot) {
  const WorldConfig& c = world_.config;
  const std::vector<int>& same_type =
      entities_by_type_[static_cast<size_t>(key.entity) % entities_by_type_.size()];
  for (int attempt = 0; attempt < 200; ++attempt) {
    FactKey sib = key;
    const Slot s = static_cast<Slot>(rng_.Index(3));
    switch (s) {
      case Slot::kEntity:
        if (same_type.size() < 2) continue;
        sib.entity = same_type[rng_.Index(same_type.size())];
        break;
      case Slot::kAttribute:
        sib.attribute = static_cast<int>(rng_.Index(c.n_attributes));
        break;
      case Slot::kYear:
        sib.year = static_cast<int>(rng_.Index(c.n_years));
        break;
    }
    if (sib == key || world_.fact_index.count(sib)) continue;
    *slot = s;
    return sib;
  }
  return std::nullopt;
}

Tokens WorldBuilder::QuestionTokens(const FactKey& key, bool use_synonym) {
  const Attribute& a = kAttributes[static_cast<size_t>(key.attribute)];
  std::string verb = a.verb;
  if (use_synonym) verb = a.synonyms[rng_.Index(a.synonyms.size())];
  return {"who",
          verb,
          "the",
          world_.entity_names[static_cast<size_t>(key.entity)],
          world_.entity_types[static_cast<size_t>(key.entity)],
          "in",
          YearToken(key.year)};
}

Tokens WorldBuilder::Filler(int n) {
  Tokens out;
  for (int i = 0; i < n; ++i) out.push_back(filler_words_[rng_.Index(filler_words_.size())]);
  return out;
}

Passage WorldBuilder::FactPassage(const Fact& f, const std::string& id) {
  const WorldConfig& c = world_.config;
  const std::string& name = world_.entity_names[static_cast<size_t>(f.key.entity)];
  const std::string& type = world_.entity_types[static_cast<size_t>(f.key.entity)];
  const int half = c.filler_tokens / 2;
  std::string body = "the " + name + " " + type + " is well known";
  if (half > 0) body += " for " + Join(Filler(half));
  body += ". in " + YearToken(f.key.year) + " it was " +
          kAttributes[static_cast<size_t>(f.key.attribute)].verb + " by " + f.answer + ".";
  if (c.filler_tokens - half > 0) body += " " + Join(Filler(c.filler_tokens - half)) + ".";
  return MakePassage(id, name + " " + type, body);
}

Passage WorldBuilder::DistractorPassage(const FactKey& key, const std::string& id) {
  const WorldConfig& c = world_.config;
  const std::string& name = world_.entity_names[static_cast<size_t>(key.entity)];
  const std::string& type = world_.entity_types[static_cast<size_t>(key.entity)];
  const int half = c.filler_tokens / 2;
  std::string body = "archive notes about the " + name + " " + type;
  if (half > 0) body += " " + Join(Filler(half));
  body += ". in " + YearToken(key.year) + " plans were discussed for the " +
          kAttributes[static_cast<size_t>(key.attribute)].verb + " " + type;
  if (c.filler_tokens - half > 0) body += " " + Join(Filler(c.filler_tokens - half));
  return MakePassage(id, name + " " + type, body + ".");
}

Question WorldBuilder::MeqFrom(const Question& q, const FactKey& from,
                               const FactKey& to, std::string id) {
  Tokens tokens = q.tokens;
  if (from.entity != to.entity) {
    tokens[FindToken(tokens, world_.entity_names[static_cast<size_t>(from.entity)])] =
        world_.entity_names[static_cast<size_t>(to.entity)];
  }
  if (from.attribute != to.attribute) {
    tokens[FindVerb(tokens)] = kAttributes[static_cast<size_t>(to.attribute)].verb;
  }
  if (from.year != to.year) {
    tokens[FindToken(tokens, YearToken(from.year))] = YearToken(to.year);
  }
  const Fact& target = world_.facts[world_.fact_index.at(to)];
  return MakeQuestion(std::move(id), QuestionText(tokens), {target.answer});
}

void WorldBuilder::SelfCheckMeq(const Question& q, const Question& meq,
                                const DualEncoder& probe) {
  const FilterConfig cfg;
  for (const FilterVerdict& v :
       {QualityControl(q, meq, cfg), LexicalFilter(q, meq, cfg),
        ParaphraseFilter(q, meq, ContentMultisetParaphrase),
        AnswerDifference(q.answers, meq.answers)}) {
    if (!v.passed) {
      throw GenerationError("generated pair (" + q.id + ", " + meq.id +
                            ") fails stage " + std::string(StageName(v.stage)) +
                            ": " + v.reason);
    }
  }
  ++world_.self_check.meq_pairs;
  if (SemanticFilter(probe.EncodeQuestion(q), probe.EncodeQuestion(meq), cfg).passed) {
    ++world_.self_check.meq_semantic_passed;
  }
}

void WorldBuilder::SelfCheckParaphrase(const Question& q, const Question& para) {
  if (WordEditDistance(q.tokens, para.tokens) < 1) {
    throw GenerationError("paraphrase " + para.id + " equals its question");
  }
  if (!SynonymAwareParaphrase(q, para)) {
    throw GenerationError("paraphrase " + para.id + " rejected by detector");
  }
  if (AnswerDifference(q.answers, para.answers).passed) {
    throw GenerationError("paraphrase " + para.id + " changes the answer");
  }
  ++world_.self_check.paraphrases;
}

World WorldBuilder::Build() {
  const WorldConfig& c = world_.config;
  c.Validate();

  // Vocabulary: entity names, then person-name words, then filler.
  std::vector<std::string> vocab = MakeVocabulary(c.vocab_size, rng_);
  const size_t n_names = static_cast<size_t>(std::max(40, (c.vocab_size - c.n_entities) / 3));
  if (static_cast<size_t>(c.n_entities) + n_names + 40 > vocab.size()) {
    throw GenerationError("vocab_size too small for the requested entities");
  }
  world_.entity_names.assign(vocab.begin(), vocab.begin() + c.n_entities);
  name_words_.assign(vocab.begin() + c.n_entities,
                     vocab.begin() + c.n_entities + static_cast<long>(n_names));
  filler_words_.assign(vocab.begin() + c.n_entities + static_cast<long>(n_names),
                       vocab.end());
  const size_t n_types = std::min<size_t>(kEntityTypes.size(),
                                          std::max<size_t>(1, c.n_entities / 10));
  entities_by_type_.assign(n_types, {});
  for (int e = 0; e < c.n_entities; ++e) {
    world_.entity_types.push_back(kEntityTypes[static_cast<size_t>(e) % n_types]);
    entities_by_type_[static_cast<size_t>(e) % n_types].push_back(e);
  }

  // Facts: each training fact gets its sibling facts immediately so the
  // siblings are never themselves training facts.
  struct Planned {
    size_t fact;
    std::vector<std::pair<size_t, Slot>> pool_siblings;
    std::optional<std::pair<size_t, Slot>> contrast_sibling;
  };
  std::vector<Planned> planned;
  for (int i = 0; i < c.n_train_questions; ++i) {
    std::optional<FactKey> key = RandomFreeKey();
    if (!key) throw GenerationError("fact space exhausted; enlarge entities/years");
    Planned p{AddFact(*key, FactRole::kTrain), {}, std::nullopt};
    const int n_siblings = c.meqs_per_question + (i < c.n_contrast_questions ? 1 : 0);
    for (int s = 0; s < n_siblings; ++s) {
      Slot slot;
      std::optional<FactKey> sib = FreeSibling(*key, &slot);
      if (!sib) {
        throw GenerationError("no free sibling fact for training question " +
                              std::to_string(i));
      }
      const bool contrast = i < c.n_contrast_questions && s == n_siblings - 1;
      size_t idx = AddFact(*sib, contrast ? FactRole::kContrastMeq : FactRole::kPoolMeq);
      if (contrast) {
        p.contrast_sibling = {idx, slot};
      } else {
        p.pool_siblings.push_back({idx, slot});
      }
    }
    planned.push_back(std::move(p));
  }
  std::vector<size_t> dev_facts, test_facts;
  for (int i = 0; i < c.n_dev_questions + c.n_test_questions; ++i) {
    std::optional<FactKey> key = RandomFreeKey();
    if (!key) throw GenerationError("fact space exhausted; enlarge entities/years");
    const bool dev = i < c.n_dev_questions;
    size_t idx = AddFact(*key, dev ? FactRole::kDev : FactRole::kTest);
    (dev ? dev_facts : test_facts).push_back(idx);
  }

  // Passages: one per fact plus distractors, under shuffled ids.
  const int n_facts = static_cast<int>(world_.facts.size());
  if (c.n_passages < n_facts) {
    throw GenerationError("n_passages=" + std::to_string(c.n_passages) +
                          " is smaller than the " + std::to_string(n_facts) +
                          " facts the configuration needs");
  }
  std::vector<int> id_order(static_cast<size_t>(c.n_passages));
  for (int i = 0; i < c.n_passages; ++i) id_order[static_cast<size_t>(i)] = i;
  rng_.Shuffle(id_order);
  std::vector<Passage> passages;
  passages.reserve(static_cast<size_t>(c.n_passages));
  for (int i = 0; i < c.n_passages; ++i) {
    const std::string id = Numbered("doc", id_order[static_cast<size_t>(i)]);
    if (i < n_facts) {
      Fact& f = world_.facts[static_cast<size_t>(i)];
      f.passage_id = id;
      passages.push_back(FactPassage(f, id));
    } else {
      FactKey key;
      do {
        key = {static_cast<int>(rng_.Index(c.n_entities)),
               static_cast<int>(rng_.Index(c.n_attributes)),
               static_cast<int>(rng_.Index(c.n_years))};
      } while (world_.fact_index.count(key));
      passages.push_back(DistractorPassage(key, id));
    }
  }
  std::sort(passages.begin(), passages.end(),
            [](const Passage& a, const Passage& b) { return a.id < b.id; });
  world_.corpus = Corpus(std::move(passages));
  const Bm25Index index = Bm25Index::Build(world_.corpus.passages());

  EncoderConfig probe_cfg;
  probe_cfg.hash_buckets = 4096;
  probe_cfg.dim = 32;
  probe_cfg.rng_seed = c.seed;
  const DualEncoder probe(probe_cfg);

  auto add_question = [&](Question q, const Fact& f) {
    world_.gold[q.id] = f.passage_id;
    if (!ContainsAnswer(world_.corpus.at(f.passage_id), q.answers)) {
      throw GenerationError("gold passage of " + q.id + " lacks the answer");
    }
    world_.questions.Add(std::move(q));
  };
  auto mined = [&](const Question& q, const std::string& positive) {
    const std::string exclude[] = {positive};
    return MineHardNegatives(index, world_.corpus, q,
                             static_cast<size_t>(c.mined_negatives), exclude);
  };

  for (size_t i = 0; i < planned.size(); ++i) {
    const int n = static_cast<int>(i);
    const Fact& fact = world_.facts[planned[i].fact];
    Question q = MakeQuestion(Numbered("train", n),
                              QuestionText(QuestionTokens(fact.key,
                                                          rng_.Uniform() < c.synonym_rate)),
                              {fact.answer});
    const Question q_copy = q;
    add_question(std::move(q), fact);
    world_.train.push_back({q_copy.id, fact.passage_id, mined(q_copy, fact.passage_id),
                            Origin::kOriginal});

    AugmentationPool pool;
    std::set<std::string> para_texts;
    for (int k = 0; k < c.paraphrases_per_question; ++k) {
      for (int attempt = 0; attempt < 10; ++attempt) {
        std::optional<Question> para =
            GenerateParaphrase(q_copy, rng_, Numbered("para", n, k + 1));
        if (!para || !para_texts.insert(para->text).second) continue;
        SelfCheckParaphrase(q_copy, *para);
        pool.paraphrases.push_back(para->id);
        add_question(std::move(*para), fact);
        break;
      }
    }
    int m = 0;
    for (const auto& [sib_idx, slot] : planned[i].pool_siblings) {
      const Fact& sib = world_.facts[sib_idx];
      Question meq = MeqFrom(q_copy, fact.key, sib.key, Numbered("meq", n, ++m));
      SelfCheckMeq(q_copy, meq, probe);
      pool.meqs.push_back({meq.id, sib.passage_id, mined(meq, sib.passage_id)});
      add_question(std::move(meq), sib);
    }
    world_.pools.emplace(q_copy.id, std::move(pool));

    if (planned[i].contrast_sibling) {
      const Fact& sib = world_.facts[planned[i].contrast_sibling->first];
      Question meq = MeqFrom(q_copy, fact.key, sib.key, Numbered("cmeq", n));
      SelfCheckMeq(q_copy, meq, probe);
      if (sib.passage_id == fact.passage_id) {
        throw GenerationError("contrast question shares the original's gold");
      }
      QuestionPair pair;
      pair.original_id = q_copy.id;
      pair.variant_id = meq.id;
      pair.relation = Relation::kMeq;
      pair.edit_distance = WordEditDistance(q_copy.tokens, meq.tokens);
      world_.contrast_pairs.push_back(pair);
      world_.contrast.push_back({meq.id, sib.passage_id, {}, Origin::kOriginal});

      // Evaluation paraphrase: always a synonym swap, preferably a surface
      // form not already in the augmentation pool.
      std::optional<Question> para;
      for (int attempt = 0; attempt < 10; ++attempt) {
        para = GenerateParaphrase(q_copy, rng_, Numbered("epara", n), true,
                                  rng_.Index(2) == 0);
        if (para && !para_texts.count(para->text)) break;
      }
      if (!para) throw GenerationError("no evaluation paraphrase for " + q_copy.id);
      SelfCheckParaphrase(q_copy, *para);
      world_.triples.push_back({q_copy.id, para->id, meq.id});
      add_question(std::move(*para), fact);
      add_question(std::move(meq), sib);
    }
  }

  for (size_t i = 0; i < dev_facts.size() + test_facts.size(); ++i) {
    const bool dev = i < dev_facts.size();
    const Fact& fact =
        world_.facts[dev ? dev_facts[i] : test_facts[i - dev_facts.size()]];
    const int n = static_cast<int>(dev ? i : i - dev_facts.size());
    Question q = MakeQuestion(Numbered(dev ? "dev" : "test", n),
                              QuestionText(QuestionTokens(fact.key,
                                                          rng_.Uniform() < c.synonym_rate)),
                              {fact.answer});
    (dev ? world_.dev : world_.test).push_back({q.id, fact.passage_id, {}, Origin::kOriginal});
    add_question(std::move(q), fact);
  }
  return std::move(world_);
}

}  // namespace

void WorldConfig::Validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw InvalidInput(std::string(name) + " must be positive");
  };
  positive(n_entities, "n_entities");
  positive(n_attributes, "n_attributes");
  positive(n_years, "n_years");
  positive(n_passages, "n_passages");
  positive(n_train_questions, "n_train_questions");
  positive(n_contrast_questions, "n_contrast_questions");
  positive(n_dev_questions, "n_dev_questions");
  positive(n_test_questions, "n_test_questions");
  positive(paraphrases_per_question, "paraphrases_per_question");
  positive(meqs_per_question, "meqs_per_question");
  positive(vocab_size, "vocab_size");
  positive(mined_negatives, "mined_negatives");
  if (filler_tokens < 0) throw InvalidInput("filler_tokens must be non-negative");
  if (n_attributes > kMaxAttributes) {
    throw InvalidInput("n_attributes must be <= " + std::to_string(kMaxAttributes));
  }
  if (n_years > kMaxYears) {
    throw InvalidInput("n_years must be <= " + std::to_string(kMaxYears));
  }
  if (n_contrast_questions > n_train_questions) {
    throw InvalidInput("n_contrast_questions must not exceed n_train_questions");
  }
  if (!(synonym_rate >= 0.0 && synonym_rate <= 1.0)) {
    throw InvalidInput("synonym_rate must lie in [0, 1]");
  }
}

const Fact* World::FindFact(const FactKey& key) const {
  auto it = fact_index.find(key);
  return it == fact_index.end() ? nullptr : &facts[it->second];
}

World GenerateWorld(const WorldConfig& cfg) { return WorldBuilder(cfg).Build(); }

std::optional<Question> GenerateParaphrase(const Question& q, Rng& rng, std::string id,
                                           bool allow_synonym, bool allow_reorder) {
  Tokens tokens = q.tokens;
  const size_t verb = FindVerb(tokens);
  // "in <year>" at either end of the question.
  const bool year_last = tokens.size() >= 2 && tokens[tokens.size() - 2] == "in";
  const bool year_first = tokens.size() >= 2 && tokens[0] == "in";
  const bool can_synonym = allow_synonym && verb != std::string::npos;
  const bool can_reorder = allow_reorder && (year_last || year_first);

  std::vector<std::pair<bool, bool>> edits;  // (synonym, reorder)
  if (can_synonym) edits.push_back({true, false});
  if (can_reorder) edits.push_back({false, true});
  if (can_synonym && can_reorder) edits.push_back({true, true});
  if (edits.empty()) return std::nullopt;
  const auto [synonym, reorder] = edits[rng.Index(edits.size())];

  if (synonym) {
    const Attribute& a = kAttributes[static_cast<size_t>(VerbTable().at(tokens[verb]))];
    std::vector<std::string> options;
    for (const char* w : {a.verb, a.synonyms[0], a.synonyms[1]}) {
      if (tokens[verb] != w) options.push_back(w);
    }
    tokens[verb] = options[rng.Index(options.size())];
  }
  if (reorder) {
    Tokens moved;
    if (year_last) {
      moved.assign(tokens.end() - 2, tokens.end());
      moved.insert(moved.end(), tokens.begin(), tokens.end() - 2);
    } else {
      moved.assign(tokens.begin() + 2, tokens.end());
      moved.insert(moved.end(), tokens.begin(), tokens.begin() + 2);
    }
    tokens = std::move(moved);
  }
  return MakeQuestion(std::move(id), QuestionText(tokens), q.answers);
}

bool SynonymAwareParaphrase(const Question& q, const Question& q2) {
  auto content = [](const Tokens& tokens) {
    std::map<std::string, int> counts;
    for (const std::string& t : tokens) {
      if (DefaultStopwords().count(t)) continue;
      auto it = VerbTable().find(t);
      ++counts[it == VerbTable().end() ? t : std::string(kAttributes[it->second].verb)];
    }
    return counts;
  };
  return content(q.tokens) == content(q2.tokens);
}

std::optional<FactKey> ParseQuestionKey(const Question& q, const World& world) {
  FactKey key{-1, -1, -1};
  for (const std::string& t : q.tokens) {
    auto verb = VerbTable().find(t);
    if (verb != VerbTable().end()) {
      key.attribute = verb->second;
      continue;
    }
    if (t.size() == 4 && std::all_of(t.begin(), t.end(), ::isdigit)) {
      const int year = std::stoi(t) - kFirstYear;
      if (year >= 0 && year < world.config.n_years) key.year = year;
      continue;
    }
    auto name = std::find(world.entity_names.begin(), world.entity_names.end(), t);
    if (name != world.entity_names.end()) {
      key.entity = static_cast<int>(name - world.entity_names.begin());
    }
  }
  if (key.entity < 0 || key.attribute < 0 || key.year < 0) return std::nullopt;
  return key;
}

std::optional<GeneratedMeq> GenerateMeq(const Question& q, const World& world, Rng& rng,
                                        std::string id) {
  const std::optional<FactKey> key = ParseQuestionKey(q, world);
  if (!key) return std::nullopt;
  std::vector<std::pair<FactKey, Slot>> siblings;
  const std::string& type = world.entity_types[static_cast<size_t>(key->entity)];
  for (const auto& [k, idx] : world.fact_index) {
    const int differs = (k.entity != key->entity) + (k.attribute != key->attribute) +
                        (k.year != key->year);
    if (differs != 1) continue;
    if (k.entity != key->entity) {
      if (world.entity_types[static_cast<size_t>(k.entity)] != type) continue;
      siblings.push_back({k, Slot::kEntity});
    } else {
      siblings.push_back({k, k.attribute != key->attribute ? Slot::kAttribute : Slot::kYear});
    }
  }
  if (siblings.empty()) return std::nullopt;
  const auto& [to, slot] = siblings[rng.Index(siblings.size())];
  Tokens tokens = q.tokens;
  switch (slot) {
    case Slot::kEntity:
      tokens[FindToken(tokens, world.entity_names[static_cast<size_t>(key->entity)])] =
          world.entity_names[static_cast<size_t>(to.entity)];
      break;
    case Slot::kAttribute:
      tokens[FindVerb(tokens)] = kAttributes[static_cast<size_t>(to.attribute)].verb;
      break;
    case Slot::kYear:
      tokens[FindToken(tokens, YearToken(key->year))] = YearToken(to.year);
      break;
  }
  const Fact& target = *world.FindFact(to);
  GeneratedMeq out;
  out.question = MakeQuestion(std::move(id), QuestionText(tokens), {target.answer});
  out.gold_passage = target.passage_id;
  out.slot = slot;
  return out;
}

Json WorldConfigToJson(const WorldConfig& c) {
  return Json{{"n_entities", c.n_entities},
              {"n_attributes", c.n_attributes},
              {"n_years", c.n_years},
              {"n_passages", c.n_passages},
              {"n_train_questions", c.n_train_questions},
              {"n_contrast_questions", c.n_contrast_questions},
              {"n_dev_questions", c.n_dev_questions},
              {"n_test_questions", c.n_test_questions},
              {"paraphrases_per_question", c.paraphrases_per_question},
              {"meqs_per_question", c.meqs_per_question},
              {"vocab_size", c.vocab_size},
              {"synonym_rate", c.synonym_rate},
              {"filler_tokens", c.filler_tokens},
              {"mined_negatives", c.mined_negatives},
              {"seed", c.seed}};
}

std::vector<std::string> WriteWorld(const World& world,
                                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  WritePassages(dir / "corpus.jsonl", world.corpus.passages());
  WriteQuestions(dir / "questions.jsonl", world.questions.all());
  std::vector<Json> gold;
  for (const auto& [q, p] : world.gold) gold.push_back({{"question_id", q}, {"passage_id", p}});
  WriteJsonl(dir / "gold.jsonl", gold);
  WriteTrainingExamples(dir / "train.jsonl", world.train);
  WriteTrainingExamples(dir / "dev.jsonl", world.dev);
  WriteTrainingExamples(dir / "test.jsonl", world.test);
  WriteTrainingExamples(dir / "contrast.jsonl", world.contrast);
  WritePairs(dir / "contrast_pairs.jsonl", world.contrast_pairs);
  WritePools(dir / "pools.jsonl", world.pools);
  WriteTriples(dir / "triples.jsonl", world.triples);
  return {"corpus.jsonl",   "questions.jsonl",      "gold.jsonl",
          "train.jsonl",    "dev.jsonl",            "test.jsonl",
          "contrast.jsonl", "contrast_pairs.jsonl", "pools.jsonl",
          "triples.jsonl"};
}

}  // namespace rlab
