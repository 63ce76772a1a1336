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

#ifndef MVRE_MODEL_MODEL_H_
#define MVRE_MODEL_MODEL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvre/data/encode.h"
#include "mvre/data/synth.h"
#include "mvre/encoders/encoders.h"
#include "mvre/fusion/fusion.h"
#include "mvre/numerics/graph.h"
#include "mvre/numerics/parameters.h"

namespace mvre {

enum class InputKind { kText, kFeatures };
// Bag-attention query at inference time.
enum class InferenceQuery { kPerRelation, kMeanRelation };

struct ModelConfig {
  InputKind input = InputKind::kText;
  EncoderDims encoder;
  FusionConfig fusion;
  bool share_description_encoder = false;  // reuse the sentence SRL
  bool share_type_encoder = false;         // one TRL for head and tail types
  double lambda = 0.0;                     // weight of the reconstruction loss
  InferenceQuery query = InferenceQuery::kPerRelation;

  int relations() const { return encoder.relations; }
  void Validate() const;
};

// p(k | x) for every column: softmax over R^T M2 x.
Var RelationLogits(Graph& g, const ParameterStore& store, Var x);
// Mean negative log-likelihood of the gold rows.
Var CrossEntropy(Var logits, std::span<const int> gold);

struct Forward {
  ViewVars views;
  FusionOutput fusion;
  Var logits;  // n x B
  Var loss;    // set by Model::Loss
  Var reconstruction;
};

class Model {
 public:
  Model(const ModelConfig& config, uint64_t seed, const Matrix* word_vectors = nullptr);

  const ModelConfig& config() const { return config_; }
  ParameterStore& params() { return store_; }
  const ParameterStore& params() const { return store_; }

  // The three views of text samples; bag b uses the embedding of
  // queries[b] in its selective attention.
  ViewVars TextViews(Graph& g, const std::vector<const EntityPairSample*>& samples,
                     std::span<const int> queries) const;
  // Feature samples carry their views directly.
  ViewVars FeatureViews(Graph& g, const std::vector<const SynthSample*>& samples) const;

  // Fusion and classifier on top of the views.
  Forward Head(Graph& g, const ViewVars& views) const;
  // Cross-entropy plus lambda times the reconstruction loss.
  Var Loss(Graph& g, Forward& forward, std::span<const int> gold) const;

  // n x B: entry (k, b) is p(k | x_b^(k)), where x_b^(k) is built with
  // relation k as the bag-attention query (or the mean relation).
  Matrix ScoreAllRelations(const std::vector<const EntityPairSample*>& samples) const;
  // n x B class probabilities for feature samples.
  Matrix ScoreFeatures(const std::vector<const SynthSample*>& samples) const;

  const SequenceEncoder& sentence_encoder() const { return sentence_; }
  const SequenceEncoder& description_encoder() const { return description_; }
  const SequenceEncoder& head_type_encoder() const { return head_types_; }
  const SequenceEncoder& tail_type_encoder() const { return tail_types_; }

 private:
  // Sentence vectors for all bag sentences, plus the bag offsets.
  Var SentenceVectors(Graph& g, const std::vector<const EntityPairSample*>& samples,
                      Var r_hat, std::vector<int>* offsets) const;
  Var DescriptionView(Graph& g, const std::vector<const EntityPairSample*>& samples,
                      Var r_hat) const;
  Var TypeView(Graph& g, const std::vector<const EntityPairSample*>& samples, Var r_hat) const;

  ModelConfig config_;
  ParameterStore store_;
  SequenceEncoder sentence_;
  SequenceEncoder description_;
  SequenceEncoder head_types_;
  SequenceEncoder tail_types_;
};

}  // namespace mvre

#endif  // MVRE_MODEL_MODEL_H_
