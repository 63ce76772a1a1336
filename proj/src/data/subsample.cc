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


#include "mvre/data/subsample.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "mvre/errors.h"
#include "mvre/numerics/random.h"

namespace mvre {

void SubsampleRecipe::Validate() const {
  if (max_bags < 0 || top_relations < 0 || max_test_pairs < 0) {
    throw ConfigError("subsample: limits must be >= 0");
  }
}

namespace {

// Indices of the kept records: all of them, or those of `keep` groups drawn
// from the distinct keys in order of first appearance.
template <typename Key, typename KeyOf>
std::vector<size_t> DrawGroups(const std::vector<size_t>& records, int keep, Rng& rng,
                               KeyOf key_of) {
  std::map<Key, int> group;
  std::vector<int> member;
  member.reserve(records.size());
  for (size_t i : records) {
    auto [it, inserted] = group.emplace(key_of(i), static_cast<int>(group.size()));
    member.push_back(it->second);
  }
  const int groups = static_cast<int>(group.size());
  if (keep == 0 || keep >= groups) return records;
  std::vector<char> chosen(groups, 0);
  for (int g : rng.Sample(groups, keep)) chosen[g] = 1;
  std::vector<size_t> out;
  for (size_t k = 0; k < records.size(); ++k) {
    if (chosen[member[k]]) out.push_back(records[k]);
  }
  return out;
}

}  // namespace

SubsampledCorpus Subsample(const std::vector<SentenceRecord>& train,
                           const std::vector<SentenceRecord>& test,
                           const std::vector<std::string>& relations,
                           const SubsampleRecipe& recipe) {
  recipe.Validate();
  if (relations.empty() || relations[0] != "NA") {
    throw DataError("subsample: relations must start with NA");
  }
  std::map<std::string, int> index;
  for (size_t r = 0; r < relations.size(); ++r) index[relations[r]] = static_cast<int>(r);
  auto relation_of = [&](const SentenceRecord& s) {
    auto it = index.find(s.relation);
    if (it == index.end()) throw DataError("subsample: unknown relation '" + s.relation + "'");
    return it->second;
  };

  std::vector<std::set<std::pair<std::string, std::string>>> bags(relations.size());
  for (const SentenceRecord& s : train) bags[relation_of(s)].insert({s.head, s.tail});
  for (const SentenceRecord& s : test) relation_of(s);
  std::vector<int> ranked;
  for (int r = 1; r < static_cast<int>(relations.size()); ++r) {
    if (!bags[r].empty()) ranked.push_back(r);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](int a, int b) { return bags[a].size() > bags[b].size(); });
  if (recipe.top_relations > 0 && static_cast<int>(ranked.size()) > recipe.top_relations) {
    ranked.resize(recipe.top_relations);
  }
  std::vector<char> kept(relations.size(), 0);
  kept[0] = 1;
  SubsampledCorpus out;
  out.relations.push_back("NA");
  for (int r : ranked) {
    kept[r] = 1;
    out.relations.push_back(relations[r]);
  }

  auto filter = [&](const std::vector<SentenceRecord>& sentences) {
    std::vector<size_t> records;
    for (size_t i = 0; i < sentences.size(); ++i) {
      if (kept[relation_of(sentences[i])]) records.push_back(i);
    }
    return records;
  };
  Rng rng = Rng::Derive(recipe.seed, "subsample");
  using BagKey = std::tuple<std::string, std::string, std::string>;
  using PairKey = std::pair<std::string, std::string>;
  for (size_t i : DrawGroups<BagKey>(filter(train), recipe.max_bags, rng, [&](size_t i) {
         return BagKey{train[i].head, train[i].tail, train[i].relation};
       })) {
    out.train.push_back(train[i]);
  }
  for (size_t i : DrawGroups<PairKey>(filter(test), recipe.max_test_pairs, rng, [&](size_t i) {
         return PairKey{test[i].head, test[i].tail};
       })) {
    out.test.push_back(test[i]);
  }
  return out;
}

}  // namespace mvre
