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

#ifndef MVRE_DATA_SYNTH_CORPUS_H_
#define MVRE_DATA_SYNTH_CORPUS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mvre/data/corpus.h"

namespace mvre {

// Generator for a corpus in the ingest file format, with the structure of a
// distantly supervised news corpus: relation-specific trigger words that are
// often missing (noisy bags), mostly single-sentence bags, entity classes
// exposed through multi-grained types, and descriptions that are sometimes
// absent.
struct CorpusSynthConfig {
  int n_relations = 10;  // excluding NA
  double relation_skew = 1.0;  // fact counts fall off as 1 / (rank + 1)^skew
  int n_classes = 6;
  int entities_per_class = 120;
  int train_facts = 2600;
  int test_facts = 650;
  double na_ratio = 0.8;    // NA pairs per fact
  double single_sentence = 0.8;
  int max_bag = 6;
  double trigger_prob = 0.55;   // a sentence carries its relation's trigger
  double confuse_prob = 0.15;   // ... or another relation's trigger
  double role_type_prob = 0.6;  // entity carries a type tied to its relation
  double role_desc_prob = 0.6;  // description mentions its role
  double missing_description = 0.36;
  int filler_vocab = 400;
  int min_sentence = 8;
  int max_sentence = 24;
  uint64_t seed = 1;

  void Validate() const;
};

struct SynthCorpus {
  std::vector<std::string> relations;  // NA first
  std::vector<SentenceRecord> train;
  std::vector<SentenceRecord> test;
  std::map<std::string, std::vector<std::string>> descriptions;
  std::map<std::string, std::vector<std::string>> types;
};

SynthCorpus GenerateCorpus(const CorpusSynthConfig& config);

// Writes train.jsonl, test.jsonl, descriptions.jsonl, types.jsonl and
// relations.txt into dir.
void WriteSynthCorpus(const SynthCorpus& corpus, const std::string& dir);

}  // namespace mvre

#endif  // MVRE_DATA_SYNTH_CORPUS_H_
