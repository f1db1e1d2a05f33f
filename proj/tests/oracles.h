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


// Independent brute-force oracles shared by the unit and acceptance tests.
// None of these call into the library code they check.

#ifndef RLAB_TESTS_ORACLES_H_
#define RLAB_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rlab::oracle {

using Doc = std::pair<std::string, std::vector<std::string>>;  // id, tokens

// Scores every document by the BM25 formula, scanning the whole corpus for
// document frequencies. Repeated query terms count once.
inline std::map<std::string, double> Bm25(const std::vector<Doc>& docs,
                                          const std::vector<std::string>& query,
                                          double k1 = 1.2, double b = 0.75) {
  double total = 0;
  for (const Doc& d : docs) total += static_cast<double>(d.second.size());
  const double avg = total / static_cast<double>(docs.size());
  const std::set<std::string> terms(query.begin(), query.end());
  std::map<std::string, double> scores;
  for (const Doc& d : docs) {
    double s = 0;
    for (const std::string& t : terms) {
      const double tf = static_cast<double>(std::count(d.second.begin(), d.second.end(), t));
      if (tf == 0) continue;
      double df = 0;
      for (const Doc& other : docs) {
        if (std::find(other.second.begin(), other.second.end(), t) != other.second.end()) ++df;
      }
      const double n = static_cast<double>(docs.size());
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double len = static_cast<double>(d.second.size());
      s += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg));
    }
    scores[d.first] = s;
  }
  return scores;
}

// Ids with positive score, sorted by score desc then id asc (bubble-free:
// selection of the max each round).
inline std::vector<std::string> RankByScore(std::map<std::string, double> scores) {
  std::vector<std::string> out;
  while (true) {
    std::string best;
    double best_score = 0;
    bool found = false;
    for (const auto& [id, s] : scores) {
      if (s <= 0) continue;
      if (!found || s > best_score) {  // map order gives the smallest id on ties
        best = id;
        best_score = s;
        found = true;
      }
    }
    if (!found) break;
    out.push_back(best);
    scores.erase(best);
  }
  return out;
}

// Rank of `positive` by counting candidates that beat it.
inline int Rank(const std::map<std::string, double>& scores, const std::string& positive) {
  int rank = 1;
  const double sp = scores.at(positive);
  for (const auto& [id, s] : scores) {
    if (id == positive) continue;
    if (s > sp || (s == sp && id < positive)) ++rank;
  }
  return rank;
}

// Top-k ids by score desc, id asc, via a full sort on a copy.
inline std::vector<std::string> TopK(const std::map<std::string, double>& scores, size_t k) {
  std::vector<std::pair<double, std::string>> v;
  for (const auto& [id, s] : scores) v.push_back({-s, id});
  std::sort(v.begin(), v.end());
  std::vector<std::string> out;
  for (size_t i = 0; i < v.size() && i < k; ++i) out.push_back(v[i].second);
  return out;
}

inline double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace rlab::oracle

#endif  // RLAB_TESTS_ORACLES_H_
