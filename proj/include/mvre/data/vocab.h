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

#ifndef MVRE_DATA_VOCAB_H_
#define MVRE_DATA_VOCAB_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mvre/data/corpus.h"
#include "mvre/numerics/parameters.h"

namespace mvre {

class Rng;

// String <-> id table. Reserved entries come first, then tokens sorted by
// descending frequency and lexicographically within a frequency.
class Vocabulary {
 public:
  Vocabulary() = default;
  // `reserved` get ids 0..k-1; `fallback` is returned for unknown tokens
  // (-1 = no fallback).
  explicit Vocabulary(std::vector<std::string> reserved, int fallback = -1);

  // Adds tokens with count >= min_count, in the canonical order.
  void AddCounted(const std::unordered_map<std::string, size_t>& counts,
                  size_t min_count);

  // Id of the token, or the fallback id (-1 if there is none).
  int Lookup(std::string_view token) const;
  bool Contains(std::string_view token) const;
  const std::string& Token(int id) const { return tokens_.at(id); }
  size_t CountOf(int id) const { return counts_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // "token\tcount" per line.
  void Save(const std::string& path) const;
  static Vocabulary Load(const std::string& path, int reserved, int fallback);

 private:
  int Append(const std::string& token, size_t count);

  std::vector<std::string> tokens_;
  std::vector<size_t> counts_;
  std::unordered_map<std::string, int> ids_;
  int fallback_ = -1;
};

inline constexpr int kPadWord = 0;
inline constexpr int kUnknownWord = 1;
inline constexpr int kNullType = 0;

struct Vocabularies {
  Vocabulary words;      // <pad>, <unk>, ...
  Vocabulary types;      // <null>, ...
  Vocabulary relations;  // relations file order, NA first
};

// Words are counted over sentence tokens and description tokens; types over
// the type lists of every entity in the corpus. Deterministic.
Vocabularies BuildVocab(const RawCorpus& corpus, size_t min_count);

void SaveVocab(const Vocabularies& vocab, const std::string& dir);
Vocabularies LoadVocab(const std::string& dir);

// Reads "word v1 ... vD" lines into a D x |words| table. Rows of words not in
// the file are drawn uniformly from [-0.1, 0.1]. Throws DataError on a line
// with the wrong dimension.
Matrix LoadWordVectors(const std::string& path, const Vocabulary& words,
                       int dim, Rng& rng, size_t* matched = nullptr);

}  // namespace mvre

#endif  // MVRE_DATA_VOCAB_H_
