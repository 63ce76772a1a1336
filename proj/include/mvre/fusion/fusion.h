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

#ifndef MVRE_FUSION_FUSION_H_
#define MVRE_FUSION_FUSION_H_

#include <array>
#include <string>

#include "mvre/numerics/graph.h"
#include "mvre/numerics/parameters.h"

namespace mvre {

class Rng;

enum class FusionStrategy { kInsrl, kInsrlAvg, kMvAvg, kMvAtt };
enum class FusionForm { kLearnable, kClosed };

// insrl | insrl-avg | mv-avg | mv-att; throws ConfigError otherwise.
FusionStrategy ParseFusionStrategy(const std::string& name);
std::string FusionStrategyName(FusionStrategy strategy);
// learnable | closed
FusionForm ParseFusionForm(const std::string& name);
std::string FusionFormName(FusionForm form);

struct FusionConfig {
  int d_model = 128;
  int d_x = 400;
  FusionStrategy strategy = FusionStrategy::kInsrl;
  FusionForm form = FusionForm::kLearnable;
  double ridge = 1e-3;
  std::array<bool, 3> present = {true, true, true};

  bool UsesAttention() const {
    return strategy == FusionStrategy::kInsrl || strategy == FusionStrategy::kMvAtt;
  }
  bool UsesIntactSpace() const {
    return strategy == FusionStrategy::kInsrl || strategy == FusionStrategy::kInsrlAvg;
  }
  int PresentCount() const;
  void Validate() const;
};

// Registers only what the strategy uses.
void RegisterFusion(ParameterStore& store, const FusionConfig& config, Rng& rng);

// Views are d_model x B; absent views hold an invalid Var.
using ViewVars = std::array<Var, 3>;

// 3 x B attention over the views, zero rows for absent views.
Var ViewAttention(Graph& g, const ParameterStore& store, const ViewVars& views,
                  const std::array<bool, 3>& present, Var r_hat);
// 3 x B constant weights, uniform over the present views.
Var UniformViewWeights(Graph& g, const std::array<bool, 3>& present, Eigen::Index batch);

// x = W sum_j gamma_j W_hat_j^T v_j, d_x x B.
Var IntactLearnable(Graph& g, const ParameterStore& store, const ViewVars& views, Var gamma,
                    const std::array<bool, 3>& present);
// Per column: (sum_j gamma_j W_hat_j^T W_hat_j + ridge I) x = sum_j gamma_j W_hat_j^T v_j.
Var IntactClosedForm(Graph& g, const ParameterStore& store, const ViewVars& views, Var gamma,
                     const std::array<bool, 3>& present, double ridge);
// Mean over columns of sum_j gamma_j |v_j - W_hat_j x|^2.
Var ReconstructionLoss(Graph& g, const ParameterStore& store, const ViewVars& views, Var x,
                       Var gamma, const std::array<bool, 3>& present);

struct FusionOutput {
  Var x;      // d_x x B
  Var gamma;  // 3 x B; invalid for mv-avg
};

FusionOutput Fuse(Graph& g, const ParameterStore& store, const FusionConfig& config,
                  const ViewVars& views, Var r_hat);

}  // namespace mvre

#endif  // MVRE_FUSION_FUSION_H_
