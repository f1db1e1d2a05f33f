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

#include "rlab/io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rlab {

void ForEachJsonl(const std::filesystem::path& path,
                  const std::function<void(const Json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw DataError(where + ": malformed JSON: " + e.what());
    }
    try {
      fn(j);
    } catch (const Json::exception& e) {
      throw DataError(where + ": bad record: " + e.what());
    } catch (const InvalidInput& e) {
      throw DataError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
}

void WriteJsonl(const std::filesystem::path& path,
                const std::vector<Json>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const Json& r : records) out << r.dump() << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError(path.string() + ": malformed JSON: " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const Json& doc) {
  WriteTextFile(path, doc.dump(2) + "\n");
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

Json ToJson(const Question& q) {
  return Json{{"id", q.id}, {"text", q.text}, {"answers", q.answers}};
}

Question QuestionFromJson(const Json& j) {
  return MakeQuestion(j.at("id").get<std::string>(),
                      j.at("text").get<std::string>(),
                      j.at("answers").get<std::vector<std::string>>());
}

Json ToJson(const Passage& p) {
  return Json{{"id", p.id}, {"title", p.title}, {"text", p.text}};
}

Passage PassageFromJson(const Json& j) {
  return MakePassage(j.at("id").get<std::string>(),
                     j.value("title", std::string()),
                     j.at("text").get<std::string>());
}

Json ToJson(const FilterVerdict& v) {
  return Json{{"stage", std::string(StageName(v.stage))},
              {"passed", v.passed},
              {"reason", v.reason}};
}

Json ToJson(const QuestionPair& pair) {
  Json j{{"original_id", pair.original_id},
         {"variant_id", pair.variant_id},
         {"relation", std::string(RelationName(pair.relation))}};
  if (!pair.filter_report.empty()) {
    j["edit_distance"] = pair.edit_distance;
    j["semantic_similarity"] = pair.semantic_similarity
                                   ? Json(*pair.semantic_similarity)
                                   : Json(nullptr);
    Json report = Json::array();
    for (const FilterVerdict& v : pair.filter_report) report.push_back(ToJson(v));
    j["filter_report"] = std::move(report);
  }
  return j;
}

QuestionPair PairFromJson(const Json& j) {
  QuestionPair pair;
  pair.original_id = j.at("original_id").get<std::string>();
  pair.variant_id = j.at("variant_id").get<std::string>();
  pair.relation = ParseRelation(j.at("relation").get<std::string>());
  pair.edit_distance = j.value("edit_distance", 0);
  if (j.contains("semantic_similarity") && !j["semantic_similarity"].is_null()) {
    pair.semantic_similarity = j["semantic_similarity"].get<double>();
  }
  return pair;
}

std::vector<Question> ReadQuestions(const std::filesystem::path& path) {
  std::vector<Question> out;
  ForEachJsonl(path, [&](const Json& j) { out.push_back(QuestionFromJson(j)); });
  return out;
}

std::vector<Passage> ReadPassages(const std::filesystem::path& path) {
  std::vector<Passage> out;
  ForEachJsonl(path, [&](const Json& j) { out.push_back(PassageFromJson(j)); });
  return out;
}

std::vector<QuestionPair> ReadPairs(const std::filesystem::path& path) {
  std::vector<QuestionPair> out;
  ForEachJsonl(path, [&](const Json& j) { out.push_back(PairFromJson(j)); });
  return out;
}

void WriteQuestions(const std::filesystem::path& path,
                    const std::vector<Question>& questions) {
  std::vector<Json> records;
  records.reserve(questions.size());
  for (const Question& q : questions) records.push_back(ToJson(q));
  WriteJsonl(path, records);
}

void WritePassages(const std::filesystem::path& path,
                   const std::vector<Passage>& passages) {
  std::vector<Json> records;
  records.reserve(passages.size());
  for (const Passage& p : passages) records.push_back(ToJson(p));
  WriteJsonl(path, records);
}

void WritePairs(const std::filesystem::path& path,
                const std::vector<QuestionPair>& pairs) {
  std::vector<Json> records;
  records.reserve(pairs.size());
  for (const QuestionPair& p : pairs) records.push_back(ToJson(p));
  WriteJsonl(path, records);
}

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace rlab
