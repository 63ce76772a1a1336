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

#include "mvre/data/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "json.hpp"
#include "mvre/errors.h"

namespace mvre {

using nlohmann::json;

namespace {

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream CreateOrThrow(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

// Calls `fn(record, line_number)` for every non-blank line.
template <typename Fn>
void ForEachJsonLine(const std::string& path, Fn fn) {
  std::ifstream in = OpenOrThrow(path);
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
      fn(record, number);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(number) +
                      ": malformed record: " + e.what());
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

std::vector<std::string> StringList(const json& value) {
  return value.get<std::vector<std::string>>();
}

}  // namespace

std::vector<std::string> ReadRelations(const std::string& path) {
  std::ifstream in = OpenOrThrow(path);
  std::vector<std::string> relations;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    relations.push_back(line);
  }
  if (relations.empty() || relations[0] != "NA") {
    throw DataError(path + ": first relation must be NA");
  }
  std::set<std::string> unique(relations.begin(), relations.end());
  if (unique.size() != relations.size()) {
    throw DataError(path + ": duplicate relation names");
  }
  return relations;
}

std::vector<SentenceRecord> ReadSentences(const std::string& path) {
  std::vector<SentenceRecord> sentences;
  ForEachJsonLine(path, [&](const json& r, size_t) {
    SentenceRecord s;
    s.head = r.at("head").get<std::string>();
    s.tail = r.at("tail").get<std::string>();
    s.relation = r.at("relation").get<std::string>();
    s.tokens = StringList(r.at("tokens"));
    s.head_pos = r.at("head_pos").get<int>();
    s.tail_pos = r.at("tail_pos").get<int>();
    const int n = static_cast<int>(s.tokens.size());
    if (s.head_pos < 0 || s.head_pos >= n || s.tail_pos < 0 || s.tail_pos >= n) {
      throw DataError("entity position outside the " + std::to_string(n) +
                      "-token sentence");
    }
    sentences.push_back(std::move(s));
  });
  return sentences;
}

std::map<std::string, std::vector<std::string>> ReadDescriptions(
    const std::string& path) {
  std::map<std::string, std::vector<std::string>> out;
  ForEachJsonLine(path, [&](const json& r, size_t) {
    out[r.at("entity").get<std::string>()] = StringList(r.at("tokens"));
  });
  return out;
}

std::map<std::string, std::vector<std::string>> ReadTypes(const std::string& path) {
  std::map<std::string, std::vector<std::string>> out;
  ForEachJsonLine(path, [&](const json& r, size_t) {
    out[r.at("entity").get<std::string>()] = StringList(r.at("types"));
  });
  return out;
}

std::vector<RawBag> GroupBags(const std::vector<SentenceRecord>& sentences,
                              const std::vector<std::string>& relations,
                              BagGrouping grouping) {
  std::unordered_map<std::string, int> relation_ids;
  for (size_t i = 0; i < relations.size(); ++i) {
    relation_ids.emplace(relations[i], static_cast<int>(i));
  }
  std::vector<RawBag> bags;
  std::unordered_map<std::string, size_t> bag_index;
  for (const SentenceRecord& s : sentences) {
    auto rel = relation_ids.find(s.relation);
    if (rel == relation_ids.end()) {
      throw DataError("unknown relation '" + s.relation + "' for pair (" + s.head +
                      ", " + s.tail + ")");
    }
    std::string key = s.head + '\t' + s.tail;
    if (grouping == BagGrouping::kByPairAndRelation) key += '\t' + s.relation;
    auto [it, inserted] = bag_index.emplace(key, bags.size());
    if (inserted) {
      RawBag bag;
      bag.head = s.head;
      bag.tail = s.tail;
      bag.relation = rel->second;
      bags.push_back(std::move(bag));
    }
    RawBag& bag = bags[it->second];
    bag.sentences.push_back(s);
    if (grouping == BagGrouping::kByPair && rel->second != 0 &&
        std::find(bag.gold_relations.begin(), bag.gold_relations.end(),
                  rel->second) == bag.gold_relations.end()) {
      bag.gold_relations.push_back(rel->second);
    }
  }
  for (RawBag& bag : bags) {
    if (grouping == BagGrouping::kByPairAndRelation) {
      if (bag.relation != 0) bag.gold_relations = {bag.relation};
    } else {
      std::sort(bag.gold_relations.begin(), bag.gold_relations.end());
      bag.relation = bag.gold_relations.empty() ? 0 : bag.gold_relations[0];
    }
  }
  return bags;
}

RawCorpus BuildCorpus(const std::vector<SentenceRecord>& sentences,
                      std::vector<std::string> relations,
                      std::map<std::string, std::vector<std::string>> descriptions,
                      std::map<std::string, std::vector<std::string>> types,
                      BagGrouping grouping) {
  RawCorpus corpus;
  corpus.relations = std::move(relations);
  corpus.bags = GroupBags(sentences, corpus.relations, grouping);
  corpus.descriptions = std::move(descriptions);
  corpus.types = std::move(types);

  CorpusStats& stats = corpus.stats;
  stats.sentences = sentences.size();
  stats.bags = corpus.bags.size();
  std::set<std::pair<std::string, std::string>> pairs;
  std::set<std::tuple<std::string, std::string, std::string>> facts;
  for (const SentenceRecord& s : sentences) {
    pairs.emplace(s.head, s.tail);
    if (s.relation != "NA") facts.emplace(s.head, s.tail, s.relation);
  }
  stats.pairs = pairs.size();
  stats.facts = facts.size();
  size_t type_total = 0;
  for (const auto& [entity, type_list] : corpus.types) type_total += type_list.size();
  stats.mean_types_per_entity =
      corpus.types.empty() ? 0.0
                           : static_cast<double>(type_total) / corpus.types.size();
  stats.entities_with_description = corpus.descriptions.size();
  return corpus;
}

RawCorpus LoadCorpus(const CorpusPaths& paths, BagGrouping grouping) {
  std::map<std::string, std::vector<std::string>> descriptions, types;
  if (!paths.descriptions.empty()) descriptions = ReadDescriptions(paths.descriptions);
  if (!paths.types.empty()) types = ReadTypes(paths.types);
  return BuildCorpus(ReadSentences(paths.sentences), ReadRelations(paths.relations),
                     std::move(descriptions), std::move(types), grouping);
}

void WriteSentences(const std::string& path,
                    const std::vector<SentenceRecord>& sentences) {
  std::ofstream out = CreateOrThrow(path);
  for (const SentenceRecord& s : sentences) {
    json r = {{"head", s.head},         {"tail", s.tail},
              {"relation", s.relation}, {"tokens", s.tokens},
              {"head_pos", s.head_pos}, {"tail_pos", s.tail_pos}};
    out << r.dump() << '\n';
  }
}

void WriteDescriptions(const std::string& path,
                       const std::map<std::string, std::vector<std::string>>& d) {
  std::ofstream out = CreateOrThrow(path);
  for (const auto& [entity, tokens] : d) {
    out << json{{"entity", entity}, {"tokens", tokens}}.dump() << '\n';
  }
}

void WriteTypes(const std::string& path,
                const std::map<std::string, std::vector<std::string>>& types) {
  std::ofstream out = CreateOrThrow(path);
  for (const auto& [entity, list] : types) {
    out << json{{"entity", entity}, {"types", list}}.dump() << '\n';
  }
}

void WriteRelations(const std::string& path,
                    const std::vector<std::string>& relations) {
  std::ofstream out = CreateOrThrow(path);
  for (const auto& r : relations) out << r << '\n';
}

}  // namespace mvre
