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

#ifndef MVRE_DATA_ENCODE_H_
#define MVRE_DATA_ENCODE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mvre/data/corpus.h"
#include "mvre/data/vocab.h"

namespace mvre {

struct EncodingConfig {
  int seq_len = 120;      // sentences and descriptions
  int type_len = 15;      // type sets
  int max_distance = 60;  // relative positions are clipped to +-max_distance
  int bag_cap = 500;      // larger bags are subsampled
  uint64_t seed = 1;

  // Relative distances map to [0, 2*max_distance]; one extra id for pads.
  int position_pad() const { return 2 * max_distance + 1; }
  int position_vocab() const { return 2 * max_distance + 2; }
  void Validate() const;
};

struct EncodedSentence {
  std::vector<int> tokens;
  std::vector<int> head_positions;
  std::vector<int> tail_positions;
  int length = 0;  // tokens before padding
};

struct EncodedDescription {
  std::vector<int> tokens;
  std::vector<int> positions;
  int length = 0;
};

// Fixed-size type list padded with kNullType. Order carries no meaning.
struct EncodedTypeSet {
  std::vector<int> types;
};

struct EntityPairSample {
  std::string head;
  std::string tail;
  std::vector<EncodedSentence> bag;
  EncodedDescription head_description;
  EncodedDescription tail_description;
  EncodedTypeSet head_types;
  EncodedTypeSet tail_types;
  int relation = 0;
  // Every non-NA gold relation of the pair (evaluation sets).
  std::vector<int> gold_relations;
};

// Relative position id of `index` w.r.t. an entity at `entity`.
int PositionId(int index, int entity, const EncodingConfig& config);

EncodedSentence EncodeSentence(const SentenceRecord& sentence,
                               const Vocabulary& words,
                               const EncodingConfig& config);
// The entity position is the first token equal to the entity name (or to
// its first name piece); 0 if there is none.
EncodedDescription EncodeDescription(const std::vector<std::string>& tokens,
                                     const std::string& entity,
                                     const Vocabulary& words,
                                     const EncodingConfig& config);
// Unknown types are dropped. Sets larger than type_len keep a subset drawn
// from a stream seeded by (config.seed, entity).
EncodedTypeSet EncodeTypeSet(const std::vector<std::string>& types,
                             const std::string& entity, const Vocabulary& vocab,
                             const EncodingConfig& config);

// Pseudo-description for entities without one: the name split on '_' / ' '.
std::vector<std::string> SurfaceTokens(const std::string& entity);

EntityPairSample EncodeSample(const RawBag& bag, const RawCorpus& corpus,
                              const Vocabularies& vocab,
                              const EncodingConfig& config);
std::vector<EntityPairSample> EncodeCorpus(const RawCorpus& corpus,
                                           const Vocabularies& vocab,
                                           const EncodingConfig& config);

// Token strings of the unpadded part.
std::vector<std::string> DecodeTokens(const std::vector<int>& ids, int length,
                                      const Vocabulary& words);

// Encoded samples as line-delimited JSON.
void SaveSamples(const std::string& path,
                 const std::vector<EntityPairSample>& samples);
std::vector<EntityPairSample> LoadSamples(const std::string& path);

}  // namespace mvre

#endif  // MVRE_DATA_ENCODE_H_
