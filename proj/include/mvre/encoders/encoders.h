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

#ifndef MVRE_ENCODERS_ENCODERS_H_
#define MVRE_ENCODERS_ENCODERS_H_

#include <string>
#include <vector>

#include "mvre/data/encode.h"
#include "mvre/numerics/graph.h"
#include "mvre/numerics/parameters.h"

namespace mvre {

class Rng;

struct EncoderDims {
  int d_model = 128;
  int word_dim = 50;
  int position_dim = 14;  // sentences split it between head and tail tables
  int type_dim = 16;
  int conv_layers = 4;
  int conv_width = 7;
  int heads = 8;
  bool use_rat = true;  // false: mean pooling over non-pad positions

  int words = 0;
  int types = 0;
  int positions = 0;
  int relations = 0;

  void Validate() const;
};

// Equal-length padded sequences laid out back to back: entry s * length + i
// belongs to sequence s, position i.
struct SequenceBatch {
  int length = 0;
  int count = 0;
  std::vector<int> tokens;
  std::vector<int> first_positions;   // head-relative, or entity-relative
  std::vector<int> second_positions;  // tail-relative; empty for descriptions
  std::vector<char> mask;             // 1 for real tokens
};

struct TypeBatch {
  int length = 0;
  int count = 0;
  std::vector<int> types;
  std::vector<char> mask;  // null types are masked unless a set has no other
};

SequenceBatch MakeSentenceBatch(const std::vector<const EncodedSentence*>& sentences);
SequenceBatch MakeDescriptionBatch(const std::vector<const EncodedDescription*>& descriptions);
TypeBatch MakeTypeBatch(const std::vector<const EncodedTypeSet*>& sets);

// Word, position and type tables plus the projections M and M1, shared by
// every encoder instance. Also owns the relation embeddings R.
void RegisterEmbeddings(ParameterStore& store, const EncoderDims& dims, Rng& rng,
                        const Matrix* word_vectors = nullptr);

// d_model x (count * length): M [word; position] per token.
Var EmbedSequence(Graph& g, const ParameterStore& store, const SequenceBatch& batch);
// d_model x (count * length): M1 type per entry.
Var EmbedTypes(Graph& g, const ParameterStore& store, const TypeBatch& batch);

// Mean of the relation embedding columns, d_model x 1.
Var MeanRelation(Graph& g, const ParameterStore& store);

// One SRL (with_conv) or TRL instance. Parameters live under `prefix`.
class SequenceEncoder {
 public:
  SequenceEncoder(std::string prefix, bool with_conv, const EncoderDims& dims)
      : prefix_(std::move(prefix)), with_conv_(with_conv), dims_(dims) {}

  void Register(ParameterStore& store, Rng& rng) const;

  // Residual pre-norm blocks; shapes are preserved and pad columns stay 0.
  Var ConvBlock(Graph& g, const ParameterStore& store, Var x, int length,
                const std::vector<char>& mask) const;
  Var SelfAttentionBlock(Graph& g, const ParameterStore& store, Var x, int length,
                         const std::vector<char>& mask) const;
  // Pools each sequence to one column, d_model x count. The 1 x columns
  // pooling weights are stored in *attention when given.
  Var RelationAwarePool(Graph& g, const ParameterStore& store, Var x, int length,
                        const std::vector<char>& mask, Var r_hat,
                        Var* attention = nullptr) const;

  // Blocks after embedding: [conv ->] self-attention -> pooling.
  Var Encode(Graph& g, const ParameterStore& store, Var embedded, int length,
             const std::vector<char>& mask, Var r_hat) const;

  const std::string& prefix() const { return prefix_; }
  bool with_conv() const { return with_conv_; }

 private:
  const Parameter& P(const ParameterStore& store, const std::string& name) const;

  std::string prefix_;
  bool with_conv_;
  EncoderDims dims_;
};

}  // namespace mvre

#endif  // MVRE_ENCODERS_ENCODERS_H_
