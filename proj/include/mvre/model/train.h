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

#ifndef MVRE_MODEL_TRAIN_H_
#define MVRE_MODEL_TRAIN_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mvre/data/encode.h"
#include "mvre/data/synth.h"
#include "mvre/model/model.h"

namespace mvre {

struct TrainConfig {
  double learning_rate = 0.01;
  int batch_size = 200;
  int epochs = 80;
  double clip_norm = 0.0;  // 0 disables clipping
  uint64_t seed = 1;       // shuffling stream
  // When set, parameters are written to <dir>/latest.ckpt after every epoch
  // (and also to <dir>/epoch-NNN.ckpt with keep_all_checkpoints).
  std::string checkpoint_dir;
  bool keep_all_checkpoints = false;
  // Where to dump the offending batch when the loss stops being finite.
  std::string diagnostics_path;

  void Validate() const;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;      // mean over batches
  double accuracy = 0.0;  // argmax of the training forward
  double reconstruction = 0.0;
  double grad_norm_mean = 0.0;
  double grad_norm_max = 0.0;
  std::array<double, 3> gamma_mean = {0.0, 0.0, 0.0};
};

using EpochCallback = std::function<void(const EpochLog&)>;

// SGD over shuffled mini-batches. Text samples use their gold relation as
// the bag-attention query. Throws NumericError (after writing diagnostics)
// if a loss or gradient becomes non-finite.
std::vector<EpochLog> TrainText(Model& model, const std::vector<EntityPairSample>& samples,
                                const TrainConfig& config, const EpochCallback& on_epoch = {});
std::vector<EpochLog> TrainFeatures(Model& model, const std::vector<SynthSample>& samples,
                                    const TrainConfig& config,
                                    const EpochCallback& on_epoch = {});

// Fraction of feature samples whose argmax class is the label.
double FeatureAccuracy(const Model& model, const std::vector<SynthSample>& samples,
                       int batch_size = 500);

}  // namespace mvre

#endif  // MVRE_MODEL_TRAIN_H_
