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


#ifndef MVRE_DATA_SUBSAMPLE_H_
#define MVRE_DATA_SUBSAMPLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mvre/data/corpus.h"

namespace mvre {

// Scaled-down corpus: keep the top_relations most frequent relations (by
// training bags) plus NA, drop sentences of every other relation, then draw
// max_bags training bags and max_test_pairs test pairs. Zero disables a
// limit.
struct SubsampleRecipe {
  int max_bags = 5000;
  int top_relations = 10;
  int max_test_pairs = 0;
  uint64_t seed = 1;

  void Validate() const;
};

struct SubsampledCorpus {
  std::vector<std::string> relations;  // NA, then by descending frequency
  std::vector<SentenceRecord> train;
  std::vector<SentenceRecord> test;
};

// Order of the kept sentences follows the input. Throws DataError on a
// relation missing from `relations`.
SubsampledCorpus Subsample(const std::vector<SentenceRecord>& train,
                           const std::vector<SentenceRecord>& test,
                           const std::vector<std::string>& relations,
                           const SubsampleRecipe& recipe);

}  // namespace mvre

#endif  // MVRE_DATA_SUBSAMPLE_H_
