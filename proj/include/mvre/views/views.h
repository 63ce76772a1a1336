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

#ifndef MVRE_VIEWS_VIEWS_H_
#define MVRE_VIEWS_VIEWS_H_

#include <span>

#include "mvre/numerics/graph.h"
#include "mvre/numerics/parameters.h"

namespace mvre {

class Rng;

// W1 as a diagonal vector (initialized to ones), and W2/b2, W3/b3.
void RegisterViews(ParameterStore& store, int d_model, Rng& rng);

struct BagAttention {
  Var view;     // d_model x bags
  Var weights;  // 1 x sentences, a distribution within every bag
};

// Selective attention: sentences is d_model x N holding the bags back to
// back (bag b spans [offsets[b], offsets[b+1])); queries[b] is the relation
// whose embedding scores the sentences of bag b.
BagAttention AttendBag(Graph& g, const ParameterStore& store, Var sentences,
                       std::span<const int> offsets, std::span<const int> queries);
// Same with explicit d_model x bags query vectors.
BagAttention AttendBag(Graph& g, const ParameterStore& store, Var sentences,
                       std::span<const int> offsets, Var queries);

// tanh(W [head; tail] + b) with prefix "view2" (descriptions) or "view3"
// (types). head and tail are d_model x B.
Var PairView(Graph& g, const ParameterStore& store, const char* prefix, Var head, Var tail);

}  // namespace mvre

#endif  // MVRE_VIEWS_VIEWS_H_
