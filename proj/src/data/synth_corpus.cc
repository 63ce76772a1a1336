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

#include "mvre/data/synth_corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <utility>

#include "mvre/errors.h"
#include "mvre/numerics/random.h"

namespace mvre {

void CorpusSynthConfig::Validate() const {
  if (n_relations < 1) throw ConfigError("corpus synth: n_relations must be positive");
  if (n_classes < 2) throw ConfigError("corpus synth: n_classes must be at least 2");
  if (entities_per_class < 2) throw ConfigError("corpus synth: too few entities");
  if (train_facts < 1 || test_facts < 1) throw ConfigError("corpus synth: facts must be positive");
  if (max_bag < 1) throw ConfigError("corpus synth: max_bag must be positive");
  if (!(relation_skew >= 0.0)) throw ConfigError("corpus synth: relation_skew must be >= 0");
  if (min_sentence < 4 || max_sentence < min_sentence) {
    throw ConfigError("corpus synth: invalid sentence length range");
  }
  if (filler_vocab < 10) throw ConfigError("corpus synth: filler_vocab too small");
  for (double p : {single_sentence, trigger_prob, confuse_prob, role_type_prob,
                   role_desc_prob, missing_description}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("corpus synth: probability out of range");
  }
  if (trigger_prob + confuse_prob > 1.0) {
    throw ConfigError("corpus synth: trigger_prob + confuse_prob exceeds 1");
  }
}

namespace {

struct Signature {
  int head_class;
  int tail_class;
};

class Generator {
 public:
  explicit Generator(const CorpusSynthConfig& config)
      : config_(config), rng_(Rng::Derive(config.seed, "corpus")) {}

  SynthCorpus Run() {
    SynthCorpus out;
    out.relations.push_back("NA");
    for (int r = 0; r < config_.n_relations; ++r) {
      out.relations.push_back("/rel/r" + std::to_string(r));
      // Relations share class signatures so that types alone are ambiguous.
      signatures_.push_back({static_cast<int>(rng_.Below(config_.n_classes)),
                             static_cast<int>(rng_.Below(config_.n_classes))});
    }
    for (int c = 0; c < config_.n_classes; ++c) {
      for (int e = 0; e < config_.entities_per_class; ++e) {
        entities_.push_back({"c" + std::to_string(c) + "_e" + std::to_string(e), c});
      }
    }
    roles_.resize(entities_.size());

    std::vector<double> cumulative;
    double mass = 0.0;
    for (int r = 0; r < config_.n_relations; ++r) {
      mass += std::pow(static_cast<double>(r + 1), -config_.relation_skew);
      cumulative.push_back(mass);
    }
    auto draw_relation = [&]() {
      const double u = rng_.Uniform() * mass;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      return std::min(static_cast<int>(it - cumulative.begin()), config_.n_relations - 1);
    };

    std::set<std::pair<int, int>> used;
    auto facts = [&](int count) {
      std::vector<std::pair<std::pair<int, int>, int>> result;
      while (static_cast<int>(result.size()) < count) {
        const int r = draw_relation();
        const int h = PickEntity(signatures_[r].head_class);
        const int t = PickEntity(signatures_[r].tail_class);
        if (h == t || !used.insert({h, t}).second) continue;
        roles_[h].insert("h" + std::to_string(r));
        roles_[t].insert("t" + std::to_string(r));
        result.push_back({{h, t}, r + 1});
      }
      return result;
    };
    auto train_facts = facts(config_.train_facts);
    auto test_facts = facts(config_.test_facts);
    auto na = [&](int count) {
      std::vector<std::pair<std::pair<int, int>, int>> result;
      while (static_cast<int>(result.size()) < count) {
        const int h = static_cast<int>(rng_.Below(entities_.size()));
        const int t = static_cast<int>(rng_.Below(entities_.size()));
        if (h == t || !used.insert({h, t}).second) continue;
        result.push_back({{h, t}, 0});
      }
      return result;
    };
    auto train_na = na(static_cast<int>(config_.na_ratio * config_.train_facts));
    auto test_na = na(static_cast<int>(config_.na_ratio * config_.test_facts));
    train_facts.insert(train_facts.end(), train_na.begin(), train_na.end());
    test_facts.insert(test_facts.end(), test_na.begin(), test_na.end());
    rng_.Shuffle(train_facts);
    rng_.Shuffle(test_facts);

    for (const auto& [pair, r] : train_facts) Emit(pair.first, pair.second, r, out, &out.train);
    for (const auto& [pair, r] : test_facts) Emit(pair.first, pair.second, r, out, &out.test);

    for (size_t e = 0; e < entities_.size(); ++e) {
      out.types[entities_[e].name] = Types(static_cast<int>(e));
      if (rng_.Uniform() >= config_.missing_description) {
        out.descriptions[entities_[e].name] = Description(static_cast<int>(e));
      }
    }
    return out;
  }

 private:
  struct Entity {
    std::string name;
    int entity_class;
  };

  int PickEntity(int entity_class) {
    return entity_class * config_.entities_per_class +
           static_cast<int>(rng_.Below(config_.entities_per_class));
  }

  // Zipf-like filler word.
  std::string Filler() {
    const double u = rng_.Uniform();
    const int id = static_cast<int>(std::pow(config_.filler_vocab, u)) - 1;
    return "w" + std::to_string(std::clamp(id, 0, config_.filler_vocab - 1));
  }

  void Emit(int h, int t, int relation, const SynthCorpus& corpus,
            std::vector<SentenceRecord>* sink) {
    int size = 1;
    if (rng_.Uniform() >= config_.single_sentence) {
      size = 2 + static_cast<int>(rng_.Below(std::max(1, config_.max_bag - 1)));
    }
    for (int k = 0; k < size; ++k) {
      SentenceRecord s;
      s.head = entities_[h].name;
      s.tail = entities_[t].name;
      s.relation = corpus.relations[relation];
      const int len = config_.min_sentence +
                      static_cast<int>(rng_.Below(config_.max_sentence - config_.min_sentence + 1));
      for (int i = 0; i < len; ++i) s.tokens.push_back(Filler());
      s.head_pos = static_cast<int>(rng_.Below(len));
      do {
        s.tail_pos = static_cast<int>(rng_.Below(len));
      } while (s.tail_pos == s.head_pos);
      s.tokens[s.head_pos] = s.head;
      s.tokens[s.tail_pos] = s.tail;

      const double u = rng_.Uniform();
      int trigger = -1;
      if (relation > 0 && u < config_.trigger_prob) {
        trigger = relation - 1;
      } else if (u < config_.trigger_prob + config_.confuse_prob) {
        trigger = static_cast<int>(rng_.Below(config_.n_relations));
      }
      if (trigger >= 0) {
        // Place it between the two mentions when there is room.
        const int lo = std::min(s.head_pos, s.tail_pos);
        const int hi = std::max(s.head_pos, s.tail_pos);
        int slot = hi - lo > 1 ? lo + 1 + static_cast<int>(rng_.Below(hi - lo - 1))
                               : static_cast<int>(rng_.Below(len));
        if (slot == s.head_pos || slot == s.tail_pos) {
          s.tokens.insert(s.tokens.begin() + hi + 1, "trig" + std::to_string(trigger));
        } else {
          s.tokens[slot] = "trig" + std::to_string(trigger);
        }
      }
      sink->push_back(std::move(s));
    }
  }

  std::vector<std::string> Types(int e) {
    const int c = entities_[e].entity_class;
    std::vector<std::string> types = {"/class" + std::to_string(c)};
    const int fine = 2 + static_cast<int>(rng_.Below(4));
    for (int f = 0; f < fine; ++f) {
      types.push_back("/class" + std::to_string(c) + "/sub" + std::to_string(rng_.Below(8)));
    }
    for (const std::string& role : roles_[e]) {
      if (rng_.Uniform() < config_.role_type_prob) types.push_back("/role/" + role);
    }
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    return types;
  }

  std::vector<std::string> Description(int e) {
    std::vector<std::string> tokens = {entities_[e].name, "is", "a",
                                       "kind" + std::to_string(entities_[e].entity_class)};
    const int len = 6 + static_cast<int>(rng_.Below(10));
    for (int i = 0; i < len; ++i) tokens.push_back(Filler());
    for (const std::string& role : roles_[e]) {
      if (rng_.Uniform() < config_.role_desc_prob) {
        const int slot = 4 + static_cast<int>(rng_.Below(tokens.size() - 3));
        tokens.insert(tokens.begin() + slot, "about" + role);
      }
    }
    return tokens;
  }

  const CorpusSynthConfig& config_;
  Rng rng_;
  std::vector<Signature> signatures_;
  std::vector<Entity> entities_;
  std::vector<std::set<std::string>> roles_;
};

}  // namespace

SynthCorpus GenerateCorpus(const CorpusSynthConfig& config) {
  config.Validate();
  const long long pairs = static_cast<long long>(config.n_classes) * config.entities_per_class;
  if (static_cast<double>(config.train_facts + config.test_facts) * (1.0 + config.na_ratio) >
      0.25 * static_cast<double>(pairs) * static_cast<double>(pairs)) {
    throw ConfigError("corpus synth: too many facts for the entity pool");
  }
  return Generator(config).Run();
}

void WriteSynthCorpus(const SynthCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  WriteSentences((root / "train.jsonl").string(), corpus.train);
  WriteSentences((root / "test.jsonl").string(), corpus.test);
  WriteDescriptions((root / "descriptions.jsonl").string(), corpus.descriptions);
  WriteTypes((root / "types.jsonl").string(), corpus.types);
  WriteRelations((root / "relations.txt").string(), corpus.relations);
}

}  // namespace mvre
