// Copyright 2026 The MVRE Authors.
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

#include "mvre/data/vocab.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mvre/errors.h"
#include "mvre/numerics/random.h"

namespace mvre {

Vocabulary::Vocabulary(std::vector<std::string> reserved, int fallback)
    : fallback_(fallback) {
  for (const auto& token : reserved) Append(token, 0);
}

int Vocabulary::Append(const std::string& token, size_t count) {
  auto [it, inserted] = ids_.emplace(token, static_cast<int>(tokens_.size()));
  if (!inserted) throw DataError("duplicate vocabulary entry: " + token);
  tokens_.push_back(token);
  counts_.push_back(count);
  return it->second;
}

void Vocabulary::AddCounted(const std::unordered_map<std::string, size_t>& counts,
                            size_t min_count) {
  std::vector<std::pair<std::string, size_t>> sorted;
  for (const auto& [token, count] : counts) {
    if (count >= min_count && ids_.count(token) == 0) sorted.emplace_back(token, count);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [token, count] : sorted) Append(token, count);
}

int Vocabulary::Lookup(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? fallback_ : it->second;
}

bool Vocabulary::Contains(std::string_view token) const {
  return ids_.count(std::string(token)) > 0;
}

void Vocabulary::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  for (size_t i = 0; i < tokens_.size(); ++i) {
    out << tokens_[i] << '\t' << counts_[i] << '\n';
  }
}

Vocabulary Vocabulary::Load(const std::string& path, int reserved, int fallback) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  Vocabulary vocab;
  vocab.fallback_ = fallback;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ":" + std::to_string(number) + ": expected token<TAB>count");
    }
    vocab.Append(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
  }
  if (vocab.size() < reserved) throw DataError(path + ": missing reserved entries");
  return vocab;
}

Vocabularies BuildVocab(const RawCorpus& corpus, size_t min_count) {
  std::unordered_map<std::string, size_t> word_counts;
  for (const RawBag& bag : corpus.bags) {
    for (const SentenceRecord& s : bag.sentences) {
      for (const auto& t : s.tokens) ++word_counts[t];
    }
  }
  for (const auto& [entity, tokens] : corpus.descriptions) {
    for (const auto& t : tokens) ++word_counts[t];
  }
  std::unordered_map<std::string, size_t> type_counts;
  for (const auto& [entity, types] : corpus.types) {
    for (const auto& t : types) ++type_counts[t];
  }

  Vocabularies vocab;
  vocab.words = Vocabulary({"<pad>", "<unk>"}, kUnknownWord);
  vocab.words.AddCounted(word_counts, std::max<size_t>(min_count, 1));
  vocab.types = Vocabulary({"<null>"}, -1);
  vocab.types.AddCounted(type_counts, 1);
  vocab.relations = Vocabulary(corpus.relations, -1);
  return vocab;
}

void SaveVocab(const Vocabularies& vocab, const std::string& dir) {
  vocab.words.Save(dir + "/words.vocab");
  vocab.types.Save(dir + "/types.vocab");
  vocab.relations.Save(dir + "/relations.vocab");
}

Vocabularies LoadVocab(const std::string& dir) {
  Vocabularies vocab;
  vocab.words = Vocabulary::Load(dir + "/words.vocab", 2, kUnknownWord);
  vocab.types = Vocabulary::Load(dir + "/types.vocab", 1, -1);
  vocab.relations = Vocabulary::Load(dir + "/relations.vocab", 1, -1);
  return vocab;
}

Matrix LoadWordVectors(const std::string& path, const Vocabulary& words, int dim,
                       Rng& rng, size_t* matched) {
  Matrix table = rng.UniformMatrix(dim, words.size(), -0.1, 0.1);
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  size_t number = 0, hits = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    // word2vec text files may start with a "count dim" header.
    if (number == 1 && values.size() == 1) continue;
    if (static_cast<int>(values.size()) != dim) {
      throw DataError(path + ":" + std::to_string(number) + ": expected " +
                      std::to_string(dim) + " values, got " +
                      std::to_string(values.size()));
    }
    if (!words.Contains(word)) continue;
    const int id = words.Lookup(word);
    for (int k = 0; k < dim; ++k) table(k, id) = values[k];
    ++hits;
  }
  if (matched != nullptr) *matched = hits;
  return table;
}

}  // namespace mvre
