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


#ifndef MVRE_EVAL_CONFIG_H_
#define MVRE_EVAL_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvre/data/encode.h"
#include "mvre/data/subsample.h"
#include "mvre/data/synth.h"
#include "mvre/data/synth_corpus.h"
#include "mvre/model/model.h"
#include "mvre/model/train.h"

namespace mvre {

enum class ExperimentKind { kSynthetic, kText };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSynthetic;
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};  // model runs
  uint64_t data_seed = 1;  // generators, subsampling and type discards

  SynthConfig synthetic;  // [synthetic]
  int synthetic_test = 500;
  CorpusSynthConfig corpus;  // [corpus]: generator for text experiments
  SubsampleRecipe subsample;  // [data]
  size_t min_count = 1;
  std::string word_vectors;
  EncodingConfig encoding;  // [encoding]
  ModelConfig model;        // [model]; vocabulary sizes are filled from the data
  TrainConfig train;        // [train]
  size_t top_k = 0;         // [eval]

  void Validate() const;
};

// Flat "section.key" -> values view of a TOML-style file.
using ConfigEntries = std::map<std::string, std::vector<std::string>>;
ConfigEntries ReadConfigEntries(const std::string& path);

// Defaults overridden by the file. Throws ConfigError on unknown keys or bad
// values, naming the key.
ExperimentConfig LoadExperimentConfig(const std::string& path);
ExperimentConfig ParseExperimentConfig(const ConfigEntries& entries);

// Every setting, for manifests.
nlohmann::json ConfigToJson(const ExperimentConfig& config);
// Inverse of ConfigToJson.
ExperimentConfig ConfigFromJson(const nlohmann::json& json);

}  // namespace mvre

#endif  // MVRE_EVAL_CONFIG_H_
