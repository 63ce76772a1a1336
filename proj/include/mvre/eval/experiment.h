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


#ifndef MVRE_EVAL_EXPERIMENT_H_
#define MVRE_EVAL_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvre/data/corpus.h"
#include "mvre/data/vocab.h"
#include "mvre/eval/config.h"
#include "mvre/eval/metrics.h"

namespace mvre {

// Encoded corpus as written by ingest.
struct TextData {
  std::vector<std::string> relations;
  Vocabularies vocab;
  std::vector<EntityPairSample> train;
  std::vector<EntityPairSample> test;  // one sample per pair, all gold relations
  Matrix word_vectors;                 // empty unless pretrained vectors were given
  EncodingConfig encoding;
  nlohmann::json stats;
};

struct CorpusFiles {
  std::string train;
  std::string test;
  std::string descriptions;
  std::string types;
  std::string relations;
};

// Files of a corpus directory (train.jsonl, test.jsonl, descriptions.jsonl,
// types.jsonl, relations.txt); missing side files are left empty.
CorpusFiles CorpusFilesIn(const std::string& dir);

// Subsample recipe, vocabulary from the training side, encoding.
TextData Ingest(const CorpusFiles& files, const ExperimentConfig& config);
void SaveTextData(const TextData& data, const std::string& dir);
TextData LoadTextData(const std::string& dir);

// Vocabulary sizes and relation count filled in from the data.
ModelConfig TextModelConfig(const ExperimentConfig& config, const TextData& data);
ModelConfig FeatureModelConfig(const ExperimentConfig& config);

struct RunResult {
  uint64_t seed = 0;
  std::vector<EpochLog> logs;
  double accuracy = 0.0;  // feature runs
  double auc = 0.0;       // text runs
  double max_f1 = 0.0;
  std::vector<PrPoint> curve;
  std::vector<Prediction> predictions;
};

struct TextEvaluation {
  std::vector<Prediction> predictions;
  std::vector<PrPoint> curve;
  double auc = 0.0;
  double max_f1 = 0.0;
};

TextEvaluation EvaluateText(const Model& model, const std::vector<EntityPairSample>& test,
                            size_t top_k = 0, int batch_size = 100);

// One training run followed by evaluation on the test split. With a
// non-empty checkpoint_dir the parameters are saved there every epoch.
RunResult RunFeatures(const ExperimentConfig& config, const ModelConfig& model,
                      const std::vector<SynthSample>& train,
                      const std::vector<SynthSample>& test, uint64_t seed,
                      const std::string& checkpoint_dir = "");
RunResult RunText(const ExperimentConfig& config, const ModelConfig& model,
                  const TextData& data, uint64_t seed, const std::string& checkpoint_dir = "");

struct Summary {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n); 0 for n = 1
  double median = 0.0;
};
Summary Summarize(const std::vector<double>& values);

// metrics.json content: per-seed values and their summaries. No timings.
nlohmann::json MetricsJson(ExperimentKind kind, const std::string& variant,
                           const std::vector<RunResult>& runs);
nlohmann::json EpochLogsJson(const std::vector<EpochLog>& logs);

enum class AblationSuite { kViews, kFusion };
AblationSuite ParseAblationSuite(const std::string& name);

struct AblationVariant {
  std::string name;
  ModelConfig model;
};

// Views: v1, v2, v3, -v1, -v2, -v3, all. Fusion: mv-avg, mv-att, no-rat
// (text only), insrl-avg, insrl.
std::vector<AblationVariant> AblationVariants(AblationSuite suite, const ModelConfig& base);

struct AblationCell {
  std::string variant;
  std::string metric;
  std::vector<uint64_t> seeds;
  std::vector<double> values;
  Summary summary;
};

using AblationProgress = std::function<void(const std::string& variant, const RunResult&)>;

std::vector<AblationCell> RunFeatureAblation(const ExperimentConfig& config, AblationSuite suite,
                                             const std::vector<SynthSample>& train,
                                             const std::vector<SynthSample>& test,
                                             const AblationProgress& progress = {});
std::vector<AblationCell> RunTextAblation(const ExperimentConfig& config, AblationSuite suite,
                                          const TextData& data,
                                          const AblationProgress& progress = {});

// variant,metric,mean,se,median,seed_<s>... ; identical inputs give
// identical bytes.
std::string AblationCsv(const std::vector<AblationCell>& cells);

}  // namespace mvre

#endif  // MVRE_EVAL_EXPERIMENT_H_
