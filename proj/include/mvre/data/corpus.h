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

#ifndef MVRE_DATA_CORPUS_H_
#define MVRE_DATA_CORPUS_H_

#include <map>
#include <string>
#include <vector>

namespace mvre {

// Line-delimited JSON inputs:
//   sentences:    {"head", "tail", "relation", "tokens": [..], "head_pos", "tail_pos"}
//   descriptions: {"entity", "tokens": [..]}
//   types:        {"entity", "types": [..]}
// and a plain-text relations file, one name per line, line 0 = "NA".
struct CorpusPaths {
  std::string sentences;
  std::string descriptions;
  std::string types;
  std::string relations;
};

struct SentenceRecord {
  std::string head;
  std::string tail;
  std::string relation;
  std::vector<std::string> tokens;
  int head_pos = 0;
  int tail_pos = 0;
};

// Sentences of one entity pair. Training bags carry exactly one relation;
// evaluation bags (grouped per pair) carry every gold relation of the pair.
struct RawBag {
  std::string head;
  std::string tail;
  int relation = 0;
  std::vector<int> gold_relations;
  std::vector<SentenceRecord> sentences;
};

enum class BagGrouping {
  kByPairAndRelation,  // one sample per (pair, relation)
  kByPair,             // one sample per pair; relation-agnostic
};

struct CorpusStats {
  size_t sentences = 0;
  size_t pairs = 0;  // distinct (head, tail)
  size_t facts = 0;  // distinct non-NA (head, tail, relation)
  size_t bags = 0;
  double mean_types_per_entity = 0.0;
  size_t entities_with_description = 0;
};

struct RawCorpus {
  std::vector<std::string> relations;
  std::vector<RawBag> bags;
  std::map<std::string, std::vector<std::string>> descriptions;
  std::map<std::string, std::vector<std::string>> types;
  CorpusStats stats;
};

std::vector<std::string> ReadRelations(const std::string& path);
// Throws DataError with "path:line" on a malformed record or an entity
// position outside the token list.
std::vector<SentenceRecord> ReadSentences(const std::string& path);
std::map<std::string, std::vector<std::string>> ReadDescriptions(
    const std::string& path);
std::map<std::string, std::vector<std::string>> ReadTypes(const std::string& path);

// Groups sentences into bags in order of first appearance. Throws DataError
// on a relation name missing from `relations`.
std::vector<RawBag> GroupBags(const std::vector<SentenceRecord>& sentences,
                              const std::vector<std::string>& relations,
                              BagGrouping grouping);

// Groups the sentences and fills in the statistics.
RawCorpus BuildCorpus(const std::vector<SentenceRecord>& sentences,
                      std::vector<std::string> relations,
                      std::map<std::string, std::vector<std::string>> descriptions,
                      std::map<std::string, std::vector<std::string>> types,
                      BagGrouping grouping);
// Empty description/types paths are allowed and yield empty maps.
RawCorpus LoadCorpus(const CorpusPaths& paths, BagGrouping grouping);

void WriteSentences(const std::string& path,
                    const std::vector<SentenceRecord>& sentences);
void WriteDescriptions(const std::string& path,
                       const std::map<std::string, std::vector<std::string>>& d);
void WriteTypes(const std::string& path,
                const std::map<std::string, std::vector<std::string>>& types);
void WriteRelations(const std::string& path,
                    const std::vector<std::string>& relations);

}  // namespace mvre

#endif  // MVRE_DATA_CORPUS_H_
