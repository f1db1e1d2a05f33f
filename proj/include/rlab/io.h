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

// JSONL reading and writing for the core record types.

#ifndef RLAB_IO_H_
#define RLAB_IO_H_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rlab/core.h"

namespace rlab {

using Json = nlohmann::json;

// Calls `fn` for every non-blank line of a JSONL file. Parse failures and
// exceptions thrown by `fn` surface as DataError naming file and line.
void ForEachJsonl(const std::filesystem::path& path,
                  const std::function<void(const Json&)>& fn);

// Writes one compact JSON document per line.
void WriteJsonl(const std::filesystem::path& path,
                const std::vector<Json>& records);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const Json& doc);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

Json ToJson(const Question& q);
Question QuestionFromJson(const Json& j);
Json ToJson(const Passage& p);
Passage PassageFromJson(const Json& j);
Json ToJson(const FilterVerdict& v);
Json ToJson(const QuestionPair& pair);
QuestionPair PairFromJson(const Json& j);

std::vector<Question> ReadQuestions(const std::filesystem::path& path);
std::vector<Passage> ReadPassages(const std::filesystem::path& path);
std::vector<QuestionPair> ReadPairs(const std::filesystem::path& path);
void WriteQuestions(const std::filesystem::path& path,
                    const std::vector<Question>& questions);
void WritePassages(const std::filesystem::path& path,
                   const std::vector<Passage>& passages);
void WritePairs(const std::filesystem::path& path,
                const std::vector<QuestionPair>& pairs);

// printf("%.17g"): exact round-trip decimal for doubles.
std::string FormatDouble(double value);

}  // namespace rlab

#endif  // RLAB_IO_H_
