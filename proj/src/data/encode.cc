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

#include "mvre/data/encode.h"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "mvre/errors.h"
#include "mvre/numerics/random.h"

namespace mvre {

using nlohmann::json;

void EncodingConfig::Validate() const {
  if (seq_len < 1) throw ConfigError("seq_len must be positive");
  if (type_len < 1) throw ConfigError("type_len must be positive");
  if (max_distance < 1) throw ConfigError("max_distance must be positive");
  if (bag_cap < 1) throw ConfigError("bag_cap must be positive");
}

int PositionId(int index, int entity, const EncodingConfig& config) {
  const int d = std::clamp(index - entity, -config.max_distance, config.max_distance);
  return d + config.max_distance;
}

EncodedSentence EncodeSentence(const SentenceRecord& sentence,
                               const Vocabulary& words,
                               const EncodingConfig& config) {
  EncodedSentence out;
  const int l = config.seq_len;
  out.length = std::min<int>(l, static_cast<int>(sentence.tokens.size()));
  out.tokens.assign(l, kPadWord);
  out.head_positions.assign(l, config.position_pad());
  out.tail_positions.assign(l, config.position_pad());
  for (int i = 0; i < out.length; ++i) {
    out.tokens[i] = words.Lookup(sentence.tokens[i]);
    out.head_positions[i] = PositionId(i, sentence.head_pos, config);
    out.tail_positions[i] = PositionId(i, sentence.tail_pos, config);
  }
  return out;
}

std::vector<std::string> SurfaceTokens(const std::string& entity) {
  std::vector<std::string> pieces;
  std::string current;
  for (char c : entity) {
    if (c == '_' || c == ' ') {
      if (!current.empty()) pieces.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) pieces.push_back(std::move(current));
  if (pieces.empty()) pieces.push_back(entity);
  return pieces;
}

EncodedDescription EncodeDescription(const std::vector<std::string>& tokens,
                                     const std::string& entity,
                                     const Vocabulary& words,
                                     const EncodingConfig& config) {
  const std::vector<std::string> name = SurfaceTokens(entity);
  int entity_pos = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == entity || tokens[i] == name[0]) {
      entity_pos = static_cast<int>(i);
      break;
    }
  }
  EncodedDescription out;
  const int l = config.seq_len;
  out.length = std::min<int>(l, static_cast<int>(tokens.size()));
  out.tokens.assign(l, kPadWord);
  out.positions.assign(l, config.position_pad());
  for (int i = 0; i < out.length; ++i) {
    out.tokens[i] = words.Lookup(tokens[i]);
    out.positions[i] = PositionId(i, entity_pos, config);
  }
  return out;
}

EncodedTypeSet EncodeTypeSet(const std::vector<std::string>& types,
                             const std::string& entity, const Vocabulary& vocab,
                             const EncodingConfig& config) {
  std::vector<int> known;
  for (const auto& t : types) {
    const int id = vocab.Lookup(t);
    if (id > kNullType && std::find(known.begin(), known.end(), id) == known.end()) {
      known.push_back(id);
    }
  }
  if (static_cast<int>(known.size()) > config.type_len) {
    Rng rng = Rng::Derive(config.seed, "types\t" + entity);
    std::vector<int> keep = rng.Sample(static_cast<int>(known.size()), config.type_len);
    std::vector<int> subset;
    for (int k : keep) subset.push_back(known[k]);
    known = std::move(subset);
  }
  EncodedTypeSet out;
  out.types.assign(config.type_len, kNullType);
  std::copy(known.begin(), known.end(), out.types.begin());
  return out;
}

EntityPairSample EncodeSample(const RawBag& bag, const RawCorpus& corpus,
                              const Vocabularies& vocab,
                              const EncodingConfig& config) {
  if (bag.sentences.empty()) {
    throw DataError("empty bag for pair (" + bag.head + ", " + bag.tail + ")");
  }
  EntityPairSample sample;
  sample.head = bag.head;
  sample.tail = bag.tail;
  sample.relation = bag.relation;
  sample.gold_relations = bag.gold_relations;

  std::vector<int> chosen;
  const int n = static_cast<int>(bag.sentences.size());
  if (n > config.bag_cap) {
    Rng rng = Rng::Derive(config.seed, "bag\t" + bag.head + '\t' + bag.tail + '\t' +
                                           std::to_string(bag.relation));
    chosen = rng.Sample(n, config.bag_cap);
  } else {
    for (int i = 0; i < n; ++i) chosen.push_back(i);
  }
  for (int i : chosen) {
    sample.bag.push_back(EncodeSentence(bag.sentences[i], vocab.words, config));
  }

  auto description = [&](const std::string& entity) {
    auto it = corpus.descriptions.find(entity);
    const std::vector<std::string> tokens =
        (it != corpus.descriptions.end() && !it->second.empty()) ? it->second
                                                                 : SurfaceTokens(entity);
    return EncodeDescription(tokens, entity, vocab.words, config);
  };
  sample.head_description = description(bag.head);
  sample.tail_description = description(bag.tail);

  static const std::vector<std::string> kNoTypes;
  auto type_set = [&](const std::string& entity) {
    auto it = corpus.types.find(entity);
    return EncodeTypeSet(it == corpus.types.end() ? kNoTypes : it->second, entity,
                         vocab.types, config);
  };
  sample.head_types = type_set(bag.head);
  sample.tail_types = type_set(bag.tail);
  return sample;
}

std::vector<EntityPairSample> EncodeCorpus(const RawCorpus& corpus,
                                           const Vocabularies& vocab,
                                           const EncodingConfig& config) {
  config.Validate();
  std::vector<EntityPairSample> samples;
  samples.reserve(corpus.bags.size());
  for (const RawBag& bag : corpus.bags) {
    samples.push_back(EncodeSample(bag, corpus, vocab, config));
  }
  return samples;
}

std::vector<std::string> DecodeTokens(const std::vector<int>& ids, int length,
                                      const Vocabulary& words) {
  std::vector<std::string> out;
  for (int i = 0; i < length; ++i) out.push_back(words.Token(ids[i]));
  return out;
}

namespace {

json SentenceToJson(const EncodedSentence& s) {
  return {{"tokens", s.tokens},
          {"head_pos", s.head_positions},
          {"tail_pos", s.tail_positions},
          {"length", s.length}};
}

json DescriptionToJson(const EncodedDescription& d) {
  return {{"tokens", d.tokens}, {"pos", d.positions}, {"length", d.length}};
}

EncodedSentence SentenceFromJson(const json& j) {
  EncodedSentence s;
  s.tokens = j.at("tokens").get<std::vector<int>>();
  s.head_positions = j.at("head_pos").get<std::vector<int>>();
  s.tail_positions = j.at("tail_pos").get<std::vector<int>>();
  s.length = j.at("length").get<int>();
  return s;
}

EncodedDescription DescriptionFromJson(const json& j) {
  EncodedDescription d;
  d.tokens = j.at("tokens").get<std::vector<int>>();
  d.positions = j.at("pos").get<std::vector<int>>();
  d.length = j.at("length").get<int>();
  return d;
}

}  // namespace

void SaveSamples(const std::string& path,
                 const std::vector<EntityPairSample>& samples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  for (const EntityPairSample& s : samples) {
    json bag = json::array();
    for (const auto& sentence : s.bag) bag.push_back(SentenceToJson(sentence));
    json record = {{"head", s.head},
                   {"tail", s.tail},
                   {"relation", s.relation},
                   {"gold", s.gold_relations},
                   {"bag", bag},
                   {"head_desc", DescriptionToJson(s.head_description)},
                   {"tail_desc", DescriptionToJson(s.tail_description)},
                   {"head_types", s.head_types.types},
                   {"tail_types", s.tail_types.types}};
    out << record.dump() << '\n';
  }
}

std::vector<EntityPairSample> LoadSamples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<EntityPairSample> samples;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const json r = json::parse(line);
      EntityPairSample s;
      s.head = r.at("head").get<std::string>();
      s.tail = r.at("tail").get<std::string>();
      s.relation = r.at("relation").get<int>();
      s.gold_relations = r.at("gold").get<std::vector<int>>();
      for (const auto& sentence : r.at("bag")) s.bag.push_back(SentenceFromJson(sentence));
      s.head_description = DescriptionFromJson(r.at("head_desc"));
      s.tail_description = DescriptionFromJson(r.at("tail_desc"));
      s.head_types.types = r.at("head_types").get<std::vector<int>>();
      s.tail_types.types = r.at("tail_types").get<std::vector<int>>();
      if (s.bag.empty()) throw DataError("empty bag");
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return samples;
}

}  // namespace mvre
