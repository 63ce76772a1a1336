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

#include "mvre/model/toy.h"

#include "mvre/numerics/random.h"

namespace mvre {

EncodingConfig ToyEncodingConfig() {
  EncodingConfig e;
  e.seq_len = 6;
  e.type_len = 4;
  e.max_distance = 3;
  return e;
}

ModelConfig ToyModelConfig() {
  const EncodingConfig e = ToyEncodingConfig();
  ModelConfig c;
  c.encoder.d_model = 8;
  c.encoder.word_dim = 5;
  c.encoder.position_dim = 4;
  c.encoder.type_dim = 3;
  c.encoder.conv_layers = 4;
  c.encoder.conv_width = 7;
  c.encoder.heads = 2;
  c.encoder.words = 12;
  c.encoder.types = 7;
  c.encoder.positions = e.position_vocab();
  c.encoder.relations = 4;
  c.fusion.d_model = 8;
  c.fusion.d_x = 12;
  return c;
}

std::vector<EntityPairSample> ToySamples(const ModelConfig& config,
                                         const EncodingConfig& encoding, int count,
                                         uint64_t seed) {
  Rng rng = Rng::Derive(seed, "toy-samples");
  const int l = encoding.seq_len;
  auto sentence = [&]() {
    EncodedSentence s;
    s.length = 1 + static_cast<int>(rng.Below(l));
    const int head = static_cast<int>(rng.Below(s.length));
    const int tail = static_cast<int>(rng.Below(s.length));
    s.tokens.assign(l, kPadWord);
    s.head_positions.assign(l, encoding.position_pad());
    s.tail_positions.assign(l, encoding.position_pad());
    for (int i = 0; i < s.length; ++i) {
      s.tokens[i] = 1 + static_cast<int>(rng.Below(config.encoder.words - 1));
      s.head_positions[i] = PositionId(i, head, encoding);
      s.tail_positions[i] = PositionId(i, tail, encoding);
    }
    return s;
  };
  auto description = [&]() {
    EncodedDescription d;
    d.length = 1 + static_cast<int>(rng.Below(l));
    const int entity = static_cast<int>(rng.Below(d.length));
    d.tokens.assign(l, kPadWord);
    d.positions.assign(l, encoding.position_pad());
    for (int i = 0; i < d.length; ++i) {
      d.tokens[i] = 1 + static_cast<int>(rng.Below(config.encoder.words - 1));
      d.positions[i] = PositionId(i, entity, encoding);
    }
    return d;
  };
  auto types = [&]() {
    EncodedTypeSet t;
    t.types.assign(encoding.type_len, kNullType);
    const int k = static_cast<int>(rng.Below(encoding.type_len + 1));
    std::vector<int> ids = rng.Sample(config.encoder.types - 1, k);
    for (int i = 0; i < k; ++i) t.types[i] = ids[i] + 1;
    rng.Shuffle(t.types);
    return t;
  };
  std::vector<EntityPairSample> samples;
  for (int i = 0; i < count; ++i) {
    EntityPairSample s;
    s.head = "h" + std::to_string(i);
    s.tail = "t" + std::to_string(i);
    const int bag = 1 + i % 3;
    for (int k = 0; k < bag; ++k) s.bag.push_back(sentence());
    s.head_description = description();
    s.tail_description = description();
    s.head_types = types();
    s.tail_types = types();
    s.relation = static_cast<int>(rng.Below(config.encoder.relations));
    if (s.relation != 0) s.gold_relations = {s.relation};
    samples.push_back(std::move(s));
  }
  return samples;
}

GradCheckOptions ToyGradCheckOptions() {
  GradCheckOptions options;
  options.epsilon = 3e-5;
  options.refine_above = 1e-5;
  return options;
}

std::vector<GradientCase> RunGradientSuite(const ModelConfig& config, int seeds,
                                           uint64_t first_seed,
                                           const GradCheckOptions& options) {
  const EncodingConfig encoding = ToyEncodingConfig();
  std::vector<GradientCase> results;
  for (int k = 0; k < seeds; ++k) {
    const uint64_t seed = first_seed + static_cast<uint64_t>(k);
    Model model(config, seed);
    const std::vector<EntityPairSample> samples = ToySamples(config, encoding, 3, seed);
    std::vector<const EntityPairSample*> batch;
    std::vector<int> gold;
    for (const auto& s : samples) {
      batch.push_back(&s);
      gold.push_back(s.relation);
    }
    auto loss = [&](Graph& g) {
      Forward f = model.Head(g, model.TextViews(g, batch, gold));
      return model.Loss(g, f, gold);
    };
    GradientCase c;
    c.name = FusionStrategyName(config.fusion.strategy) + "/" +
             FusionFormName(config.fusion.form);
    c.seed = seed;
    c.report = GradCheck(loss, model.params(), options);
    results.push_back(std::move(c));
  }
  return results;
}

}  // namespace mvre
