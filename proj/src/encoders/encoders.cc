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

#include "mvre/encoders/encoders.h"

#include "mvre/errors.h"
#include "mvre/numerics/init.h"
#include "mvre/numerics/ops.h"
#include "mvre/numerics/random.h"

namespace mvre {

void EncoderDims::Validate() const {
  if (d_model < 2) throw ConfigError("encoder: d_model must be at least 2");
  if (word_dim < 1 || type_dim < 1) throw ConfigError("encoder: embedding sizes must be positive");
  if (position_dim < 2 || position_dim % 2 != 0) {
    throw ConfigError("encoder: position_dim must be even and positive");
  }
  if (conv_layers < 0) throw ConfigError("encoder: conv_layers must be >= 0");
  if (conv_width < 1 || conv_width % 2 == 0) {
    throw ConfigError("encoder: conv_width must be odd and positive");
  }
  if (heads < 1 || d_model % heads != 0) {
    throw ConfigError("encoder: d_model must be divisible by heads");
  }
  if (words < 2 || types < 1 || positions < 1 || relations < 1) {
    throw ConfigError("encoder: vocabulary sizes are not set");
  }
}

SequenceBatch MakeSentenceBatch(const std::vector<const EncodedSentence*>& sentences) {
  SequenceBatch batch;
  batch.count = static_cast<int>(sentences.size());
  if (sentences.empty()) return batch;
  batch.length = static_cast<int>(sentences[0]->tokens.size());
  for (const EncodedSentence* s : sentences) {
    if (static_cast<int>(s->tokens.size()) != batch.length) {
      throw DimensionError("sentence batch: mixed padded lengths");
    }
    batch.tokens.insert(batch.tokens.end(), s->tokens.begin(), s->tokens.end());
    batch.first_positions.insert(batch.first_positions.end(), s->head_positions.begin(),
                                 s->head_positions.end());
    batch.second_positions.insert(batch.second_positions.end(), s->tail_positions.begin(),
                                  s->tail_positions.end());
    for (int i = 0; i < batch.length; ++i) batch.mask.push_back(i < s->length ? 1 : 0);
  }
  return batch;
}

SequenceBatch MakeDescriptionBatch(const std::vector<const EncodedDescription*>& descriptions) {
  SequenceBatch batch;
  batch.count = static_cast<int>(descriptions.size());
  if (descriptions.empty()) return batch;
  batch.length = static_cast<int>(descriptions[0]->tokens.size());
  for (const EncodedDescription* d : descriptions) {
    if (static_cast<int>(d->tokens.size()) != batch.length) {
      throw DimensionError("description batch: mixed padded lengths");
    }
    batch.tokens.insert(batch.tokens.end(), d->tokens.begin(), d->tokens.end());
    batch.first_positions.insert(batch.first_positions.end(), d->positions.begin(),
                                 d->positions.end());
    for (int i = 0; i < batch.length; ++i) batch.mask.push_back(i < d->length ? 1 : 0);
  }
  return batch;
}

TypeBatch MakeTypeBatch(const std::vector<const EncodedTypeSet*>& sets) {
  TypeBatch batch;
  batch.count = static_cast<int>(sets.size());
  if (sets.empty()) return batch;
  batch.length = static_cast<int>(sets[0]->types.size());
  for (const EncodedTypeSet* t : sets) {
    if (static_cast<int>(t->types.size()) != batch.length) {
      throw DimensionError("type batch: mixed padded lengths");
    }
    batch.types.insert(batch.types.end(), t->types.begin(), t->types.end());
    bool any = false;
    for (int id : t->types) {
      batch.mask.push_back(id != kNullType ? 1 : 0);
      any = any || id != kNullType;
    }
    if (!any) batch.mask[batch.mask.size() - batch.length] = 1;
  }
  return batch;
}

void RegisterEmbeddings(ParameterStore& store, const EncoderDims& dims, Rng& rng,
                        const Matrix* word_vectors) {
  dims.Validate();
  if (word_vectors != nullptr) {
    if (word_vectors->rows() != dims.word_dim || word_vectors->cols() != dims.words) {
      throw DimensionError("word vectors: expected " + std::to_string(dims.word_dim) + "x" +
                           std::to_string(dims.words));
    }
    store.Add("emb/word", *word_vectors);
  } else {
    store.Add("emb/word", rng.UniformMatrix(dims.word_dim, dims.words, -0.1, 0.1));
  }
  const int half = dims.position_dim / 2;
  store.Add("emb/pos_head", rng.UniformMatrix(half, dims.positions, -0.1, 0.1));
  store.Add("emb/pos_tail", rng.UniformMatrix(half, dims.positions, -0.1, 0.1));
  store.Add("emb/pos_desc", rng.UniformMatrix(dims.position_dim, dims.positions, -0.1, 0.1));
  store.Add("emb/type", rng.UniformMatrix(dims.type_dim, dims.types, -0.1, 0.1));
  store.Add("emb/M", XavierUniform(rng, dims.d_model, dims.word_dim + dims.position_dim));
  store.Add("emb/M1", XavierUniform(rng, dims.d_model, dims.type_dim));
  store.Add("rel/R", rng.GaussianMatrix(dims.d_model, dims.relations, 0.1));
}

Var EmbedSequence(Graph& g, const ParameterStore& store, const SequenceBatch& batch) {
  if (batch.count == 0) throw DimensionError("embed: empty batch");
  Var words = Gather(g.Input(store.Get("emb/word")), batch.tokens);
  Var positions;
  if (batch.second_positions.empty()) {
    positions = Gather(g.Input(store.Get("emb/pos_desc")), batch.first_positions);
  } else {
    positions = ConcatRows({Gather(g.Input(store.Get("emb/pos_head")), batch.first_positions),
                            Gather(g.Input(store.Get("emb/pos_tail")), batch.second_positions)});
  }
  return MatMul(g.Input(store.Get("emb/M")), ConcatRows({words, positions}));
}

Var EmbedTypes(Graph& g, const ParameterStore& store, const TypeBatch& batch) {
  if (batch.count == 0) throw DimensionError("embed: empty batch");
  return MatMul(g.Input(store.Get("emb/M1")), Gather(g.Input(store.Get("emb/type")), batch.types));
}

Var MeanRelation(Graph& g, const ParameterStore& store) {
  Var r = g.Input(store.Get("rel/R"));
  return Scale(MatMul(r, g.Constant(Matrix::Ones(r.cols(), 1))), 1.0 / r.cols());
}

const Parameter& SequenceEncoder::P(const ParameterStore& store, const std::string& name) const {
  return store.Get(prefix_ + "/" + name);
}

void SequenceEncoder::Register(ParameterStore& store, Rng& rng) const {
  const int d = dims_.d_model;
  auto norm = [&](const std::string& block) {
    store.Add(prefix_ + "/" + block + "/ln_gain", Matrix::Ones(d, 1));
    store.Add(prefix_ + "/" + block + "/ln_bias", Matrix::Zero(d, 1));
  };
  if (with_conv_) {
    for (int layer = 0; layer < dims_.conv_layers; ++layer) {
      const std::string block = "conv" + std::to_string(layer);
      norm(block);
      store.Add(prefix_ + "/" + block + "/kernel",
                XavierUniform(rng, d, dims_.conv_width * d, dims_.conv_width * d, d));
      store.Add(prefix_ + "/" + block + "/bias", Matrix::Zero(d, 1));
    }
  }
  norm("sat");
  for (const char* name : {"Wq", "Wk", "Wv", "Wo"}) {
    store.Add(prefix_ + "/sat/" + name, XavierUniform(rng, d, d));
  }
  if (dims_.use_rat) {
    norm("rat");
    store.Add(prefix_ + "/rat/W", XavierUniform(rng, d, d));
    store.Add(prefix_ + "/rat/w", XavierUniform(rng, d, 1));
    store.Add(prefix_ + "/rat/b", Matrix::Zero(1, 1));
  } else {
    norm("pool");
  }
}

Var SequenceEncoder::ConvBlock(Graph& g, const ParameterStore& store, Var x, int length,
                               const std::vector<char>& mask) const {
  for (int layer = 0; layer < dims_.conv_layers; ++layer) {
    const std::string block = "conv" + std::to_string(layer);
    Var y = MaskColumns(LayerNormColumns(x, g.Input(P(store, block + "/ln_gain")),
                                         g.Input(P(store, block + "/ln_bias"))),
                        mask);
    y = Conv1dSame(y, g.Input(P(store, block + "/kernel")), g.Input(P(store, block + "/bias")),
                   dims_.conv_width, length);
    x = Add(x, Relu(MaskColumns(y, mask)));
  }
  return x;
}

Var SequenceEncoder::SelfAttentionBlock(Graph& g, const ParameterStore& store, Var x, int length,
                                        const std::vector<char>& mask) const {
  Var y = MaskColumns(
      LayerNormColumns(x, g.Input(P(store, "sat/ln_gain")), g.Input(P(store, "sat/ln_bias"))),
      mask);
  Var q = MatMul(g.Input(P(store, "sat/Wq")), y);
  Var k = MatMul(g.Input(P(store, "sat/Wk")), y);
  Var v = MatMul(g.Input(P(store, "sat/Wv")), y);
  Var attended = MultiHeadAttention(q, k, v, dims_.heads, length, mask);
  return Add(x, MaskColumns(MatMul(g.Input(P(store, "sat/Wo")), attended), mask));
}

Var SequenceEncoder::RelationAwarePool(Graph& g, const ParameterStore& store, Var x, int length,
                                       const std::vector<char>& mask, Var r_hat,
                                       Var* attention) const {
  const int count = static_cast<int>(x.cols()) / length;
  std::vector<int> offsets(count + 1);
  for (int s = 0; s <= count; ++s) offsets[s] = s * length;
  const std::string block = dims_.use_rat ? "rat" : "pool";
  Var h = LayerNormColumns(x, g.Input(P(store, block + "/ln_gain")),
                           g.Input(P(store, block + "/ln_bias")));
  Var weights;
  if (dims_.use_rat) {
    Var hidden = Tanh(AddColumn(MatMul(g.Input(P(store, "rat/W")), h), r_hat));
    Var scores = AddScalar(MatMul(Transpose(g.Input(P(store, "rat/w"))), hidden),
                           g.Input(P(store, "rat/b")));
    weights = SegmentSoftmax(scores, offsets, mask);
  } else {
    weights = SegmentSoftmax(g.Constant(Matrix::Zero(1, x.cols())), offsets, mask);
  }
  if (attention != nullptr) *attention = weights;
  return SegmentWeightedSum(h, weights, offsets);
}

Var SequenceEncoder::Encode(Graph& g, const ParameterStore& store, Var embedded, int length,
                            const std::vector<char>& mask, Var r_hat) const {
  if (length <= 0 || embedded.cols() % length != 0) {
    throw DimensionError("encoder: " + std::to_string(embedded.cols()) +
                         " columns do not split into sequences of " + std::to_string(length));
  }
  Var x = MaskColumns(embedded, mask);
  if (with_conv_) x = ConvBlock(g, store, x, length, mask);
  x = SelfAttentionBlock(g, store, x, length, mask);
  return RelationAwarePool(g, store, x, length, mask, r_hat);
}

}  // namespace mvre
