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

#include "mvre/views/views.h"

#include <string>
#include <vector>

#include "mvre/errors.h"
#include "mvre/numerics/init.h"
#include "mvre/numerics/ops.h"

namespace mvre {

void RegisterViews(ParameterStore& store, int d_model, Rng& rng) {
  store.Add("view1/W1", Matrix::Ones(d_model, 1));
  for (const char* prefix : {"view2", "view3"}) {
    store.Add(std::string(prefix) + "/W", XavierUniform(rng, d_model, 2 * d_model));
    store.Add(std::string(prefix) + "/b", Matrix::Zero(d_model, 1));
  }
}

BagAttention AttendBag(Graph& g, const ParameterStore& store, Var sentences,
                       std::span<const int> offsets, std::span<const int> queries) {
  if (offsets.size() != queries.size() + 1) {
    throw DimensionError("bag attention: " + std::to_string(queries.size()) + " queries for " +
                         std::to_string(offsets.size() - 1) + " bags");
  }
  return AttendBag(g, store, sentences, offsets, Gather(g.Input(store.Get("rel/R")), queries));
}

BagAttention AttendBag(Graph& g, const ParameterStore& store, Var sentences,
                       std::span<const int> offsets, Var queries) {
  if (offsets.empty() || static_cast<Eigen::Index>(offsets.size()) != queries.cols() + 1) {
    throw DimensionError("bag attention: " + std::to_string(queries.cols()) + " queries for " +
                         std::to_string(static_cast<long>(offsets.size()) - 1) + " bags");
  }
  if (offsets.back() != sentences.cols()) {
    throw DimensionError("bag attention: offsets do not cover the sentences");
  }
  std::vector<int> owner;
  owner.reserve(sentences.cols());
  for (size_t b = 0; b + 1 < offsets.size(); ++b) {
    if (offsets[b + 1] <= offsets[b]) throw DimensionError("bag attention: empty bag");
    for (int i = offsets[b]; i < offsets[b + 1]; ++i) owner.push_back(static_cast<int>(b));
  }
  Var per_sentence = Gather(queries, owner);
  Var scores = ColumnDot(sentences, MulColumn(per_sentence, g.Input(store.Get("view1/W1"))));
  Var weights = SegmentSoftmax(scores, offsets);
  return {SegmentWeightedSum(sentences, weights, offsets), weights};
}

Var PairView(Graph& g, const ParameterStore& store, const char* prefix, Var head, Var tail) {
  const std::string p(prefix);
  return TanhAffine(g.Input(store.Get(p + "/W")), ConcatRows({head, tail}),
                    g.Input(store.Get(p + "/b")));
}

}  // namespace mvre
