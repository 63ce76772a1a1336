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

#include "mvre/model/model.h"

#include "mvre/errors.h"
#include "mvre/numerics/init.h"
#include "mvre/numerics/ops.h"
#include "mvre/numerics/random.h"
#include "mvre/views/views.h"

namespace mvre {

void ModelConfig::Validate() const {
  if (fusion.d_model != encoder.d_model) {
    throw ConfigError("model: fusion and encoder disagree on d_model");
  }
  fusion.Validate();
  if (input == InputKind::kText) {
    encoder.Validate();
  } else if (encoder.relations < 2) {
    throw ConfigError("model: at least two relations are needed");
  }
  if (lambda < 0.0) throw ConfigError("model: lambda must be >= 0");
  if (lambda > 0.0 && !fusion.UsesIntactSpace()) {
    throw ConfigError("model: the reconstruction loss needs an intact-space strategy");
  }
}

Var RelationLogits(Graph& g, const ParameterStore& store, Var x) {
  Var projected = MatMul(g.Input(store.Get("cls/M2")), x);
  return MatMul(Transpose(g.Input(store.Get("rel/R"))), projected);
}

Var CrossEntropy(Var logits, std::span<const int> gold) {
  if (gold.empty()) throw DimensionError("cross entropy: empty batch");
  return Scale(Mean(PickRows(LogSoftmaxColumns(logits), gold)), -1.0);
}

Model::Model(const ModelConfig& config, uint64_t seed, const Matrix* word_vectors)
    : config_(config),
      sentence_("srl_sent", true, config.encoder),
      description_(config.share_description_encoder ? "srl_sent" : "srl_desc", true,
                   config.encoder),
      head_types_("trl_head", false, config.encoder),
      tail_types_(config.share_type_encoder ? "trl_head" : "trl_tail", false, config.encoder) {
  config_.Validate();
  Rng rng = Rng::Derive(seed, "init");
  const int d = config_.encoder.d_model;
  if (config_.input == InputKind::kText) {
    RegisterEmbeddings(store_, config_.encoder, rng, word_vectors);
    const auto& present = config_.fusion.present;
    if (present[0] || (present[1] && config_.share_description_encoder)) {
      sentence_.Register(store_, rng);
    }
    if (present[1] && !config_.share_description_encoder) description_.Register(store_, rng);
    if (present[2]) {
      head_types_.Register(store_, rng);
      if (!config_.share_type_encoder) tail_types_.Register(store_, rng);
    }
    RegisterViews(store_, d, rng);
  } else {
    store_.Add("rel/R", rng.GaussianMatrix(d, config_.encoder.relations, 0.1));
  }
  RegisterFusion(store_, config_.fusion, rng);
  store_.Add("cls/M2", XavierUniform(rng, d, config_.fusion.d_x));
}

Var Model::SentenceVectors(Graph& g, const std::vector<const EntityPairSample*>& samples,
                           Var r_hat, std::vector<int>* offsets) const {
  std::vector<const EncodedSentence*> sentences;
  offsets->assign(1, 0);
  for (const EntityPairSample* s : samples) {
    if (s->bag.empty()) throw DataError("empty bag for (" + s->head + ", " + s->tail + ")");
    for (const EncodedSentence& sentence : s->bag) sentences.push_back(&sentence);
    offsets->push_back(static_cast<int>(sentences.size()));
  }
  SequenceBatch batch = MakeSentenceBatch(sentences);
  return sentence_.Encode(g, store_, EmbedSequence(g, store_, batch), batch.length, batch.mask,
                          r_hat);
}

Var Model::DescriptionView(Graph& g, const std::vector<const EntityPairSample*>& samples,
                           Var r_hat) const {
  std::vector<const EncodedDescription*> descriptions;
  for (const EntityPairSample* s : samples) descriptions.push_back(&s->head_description);
  for (const EntityPairSample* s : samples) descriptions.push_back(&s->tail_description);
  SequenceBatch batch = MakeDescriptionBatch(descriptions);
  Var pooled = description_.Encode(g, store_, EmbedSequence(g, store_, batch), batch.length,
                                   batch.mask, r_hat);
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  return PairView(g, store_, "view2", SliceCols(pooled, 0, n), SliceCols(pooled, n, n));
}

Var Model::TypeView(Graph& g, const std::vector<const EntityPairSample*>& samples,
                    Var r_hat) const {
  std::vector<const EncodedTypeSet*> heads, tails;
  for (const EntityPairSample* s : samples) {
    heads.push_back(&s->head_types);
    tails.push_back(&s->tail_types);
  }
  Var head, tail;
  if (config_.share_type_encoder) {
    std::vector<const EncodedTypeSet*> both = heads;
    both.insert(both.end(), tails.begin(), tails.end());
    TypeBatch batch = MakeTypeBatch(both);
    Var pooled = head_types_.Encode(g, store_, EmbedTypes(g, store_, batch), batch.length,
                                    batch.mask, r_hat);
    const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
    head = SliceCols(pooled, 0, n);
    tail = SliceCols(pooled, n, n);
  } else {
    TypeBatch hb = MakeTypeBatch(heads);
    TypeBatch tb = MakeTypeBatch(tails);
    head = head_types_.Encode(g, store_, EmbedTypes(g, store_, hb), hb.length, hb.mask, r_hat);
    tail = tail_types_.Encode(g, store_, EmbedTypes(g, store_, tb), tb.length, tb.mask, r_hat);
  }
  return PairView(g, store_, "view3", head, tail);
}

ViewVars Model::TextViews(Graph& g, const std::vector<const EntityPairSample*>& samples,
                          std::span<const int> queries) const {
  if (config_.input != InputKind::kText) throw ConfigError("model: not a text model");
  if (samples.empty()) throw DimensionError("model: empty batch");
  const auto& present = config_.fusion.present;
  Var r_hat = MeanRelation(g, store_);
  ViewVars views;
  if (present[0]) {
    std::vector<int> offsets;
    Var sentences = SentenceVectors(g, samples, r_hat, &offsets);
    views[0] = AttendBag(g, store_, sentences, offsets, queries).view;
  }
  if (present[1]) views[1] = DescriptionView(g, samples, r_hat);
  if (present[2]) views[2] = TypeView(g, samples, r_hat);
  return views;
}

ViewVars Model::FeatureViews(Graph& g, const std::vector<const SynthSample*>& samples) const {
  if (config_.input != InputKind::kFeatures) throw ConfigError("model: not a feature model");
  if (samples.empty()) throw DimensionError("model: empty batch");
  const int d = config_.encoder.d_model;
  ViewVars views;
  for (int j = 0; j < 3; ++j) {
    if (!config_.fusion.present[j]) continue;
    Matrix m(d, static_cast<Eigen::Index>(samples.size()));
    for (size_t b = 0; b < samples.size(); ++b) {
      if (samples[b]->views[j].size() != d) {
        throw DimensionError("features: view " + std::to_string(j + 1) + " has " +
                             std::to_string(samples[b]->views[j].size()) +
                             " entries, expected " + std::to_string(d));
      }
      m.col(static_cast<Eigen::Index>(b)) = samples[b]->views[j];
    }
    views[j] = g.Constant(std::move(m));
  }
  return views;
}

Forward Model::Head(Graph& g, const ViewVars& views) const {
  Forward f;
  f.views = views;
  f.fusion = Fuse(g, store_, config_.fusion, views, MeanRelation(g, store_));
  f.logits = RelationLogits(g, store_, f.fusion.x);
  return f;
}

Var Model::Loss(Graph& g, Forward& forward, std::span<const int> gold) const {
  forward.loss = CrossEntropy(forward.logits, gold);
  if (config_.lambda > 0.0) {
    forward.reconstruction = ReconstructionLoss(g, store_, forward.views, forward.fusion.x,
                                                forward.fusion.gamma, config_.fusion.present);
    forward.loss = Add(forward.loss, Scale(forward.reconstruction, config_.lambda));
  }
  return forward.loss;
}

Matrix Model::ScoreAllRelations(const std::vector<const EntityPairSample*>& samples) const {
  if (samples.empty()) throw DimensionError("model: empty batch");
  const auto& present = config_.fusion.present;
  const int n = config_.relations();
  const Eigen::Index batch = static_cast<Eigen::Index>(samples.size());
  Graph g(false);
  Var r_hat = MeanRelation(g, store_);
  ViewVars base;
  if (present[1]) base[1] = DescriptionView(g, samples, r_hat);
  if (present[2]) base[2] = TypeView(g, samples, r_hat);

  const bool per_relation = present[0] && config_.query == InferenceQuery::kPerRelation;
  if (!per_relation) {
    if (present[0]) {
      std::vector<int> offsets;
      Var sentences = SentenceVectors(g, samples, r_hat, &offsets);
      base[0] = AttendBag(g, store_, sentences, offsets, RepeatColumn(r_hat, batch)).view;
    }
    Forward f = Head(g, base);
    return SoftmaxColumns(f.logits).value();
  }

  // Candidate k occupies columns [k * batch, (k + 1) * batch).
  std::vector<int> offsets;
  Var sentences = SentenceVectors(g, samples, r_hat, &offsets);
  std::vector<int> owner, repeated_offsets(1, 0), queries, columns;
  for (int k = 0; k < n; ++k) {
    for (Eigen::Index b = 0; b < batch; ++b) {
      for (int i = offsets[b]; i < offsets[b + 1]; ++i) owner.push_back(i);
      repeated_offsets.push_back(static_cast<int>(owner.size()));
      queries.push_back(k);
      columns.push_back(static_cast<int>(b));
    }
  }
  ViewVars views;
  views[0] = AttendBag(g, store_, Gather(sentences, owner), repeated_offsets, queries).view;
  for (int j = 1; j < 3; ++j) {
    if (present[j]) views[j] = Gather(base[j], columns);
  }
  Forward f = Head(g, views);
  const Matrix probs = SoftmaxColumns(f.logits).value();
  Matrix scores(n, batch);
  for (int k = 0; k < n; ++k) {
    for (Eigen::Index b = 0; b < batch; ++b) scores(k, b) = probs(k, k * batch + b);
  }
  return scores;
}

Matrix Model::ScoreFeatures(const std::vector<const SynthSample*>& samples) const {
  Graph g(false);
  Forward f = Head(g, FeatureViews(g, samples));
  return SoftmaxColumns(f.logits).value();
}

}  // namespace mvre
