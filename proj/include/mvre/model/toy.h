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

#ifndef MVRE_MODEL_TOY_H_
#define MVRE_MODEL_TOY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mvre/data/encode.h"
#include "mvre/model/model.h"
#include "mvre/numerics/grad_check.h"

namespace mvre {

// Small text-model setting for gradient and invariance checks:
// d_model 8, d_x 12, l 6, l0 4, 4 relations, 2 heads, 4 conv layers of width 7.
ModelConfig ToyModelConfig();
EncodingConfig ToyEncodingConfig();

// Random encoded samples valid for ToyModelConfig(); bag sizes cycle 1..3.
std::vector<EntityPairSample> ToySamples(const ModelConfig& config,
                                         const EncodingConfig& encoding, int count,
                                         uint64_t seed);

// Step 3e-5 with five-point refinement of two-point estimates off by more
// than 1e-5.
GradCheckOptions ToyGradCheckOptions();

struct GradientCase {
  std::string name;
  uint64_t seed = 0;
  GradCheckReport report;
};

// End-to-end loss (encoders, views, fusion, cross-entropy) of a fresh toy
// model checked against central differences, once per seed.
std::vector<GradientCase> RunGradientSuite(const ModelConfig& config, int seeds,
                                           uint64_t first_seed = 1,
                                           const GradCheckOptions& options = ToyGradCheckOptions());

}  // namespace mvre

#endif  // MVRE_MODEL_TOY_H_
