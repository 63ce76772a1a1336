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

#include "mvre/model/train.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "mvre/errors.h"
#include "mvre/numerics/checkpoint.h"
#include "mvre/numerics/random.h"

namespace mvre {

using nlohmann::json;

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be positive");
  if (batch_size < 1) throw ConfigError("train: batch_size must be positive");
  if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
  if (clip_norm < 0.0) throw ConfigError("train: clip_norm must be >= 0");
}

namespace {

using BatchForward = std::function<Forward(Graph&, const std::vector<int>&)>;
using BatchDescription = std::function<json(const std::vector<int>&)>;

void WriteDiagnostics(const TrainConfig& config, const Model& model, int epoch, int batch,
                      const json& samples, const std::string& message) {
  if (config.diagnostics_path.empty()) return;
  json params = json::object();
  for (const Parameter* p : model.params().All()) {
    params[p->name] = {{"rows", p->value.rows()},
                       {"cols", p->value.cols()},
                       {"finite", p->value.allFinite()},
                       {"max_abs", p->value.allFinite() ? p->value.cwiseAbs().maxCoeff() : -1.0}};
  }
  json dump = {{"error", message}, {"epoch", epoch}, {"batch", batch},
               {"samples", samples}, {"parameters", params}};
  std::ofstream(config.diagnostics_path) << dump.dump(2) << '\n';
}

std::vector<EpochLog> Train(Model& model, const std::vector<int>& labels,
                            const TrainConfig& config, const BatchForward& forward,
                            const BatchDescription& describe, const EpochCallback& on_epoch) {
  config.Validate();
  const int n = static_cast<int>(labels.size());
  if (n == 0) throw DataError("train: empty training set");
  if (!config.checkpoint_dir.empty()) std::filesystem::create_directories(config.checkpoint_dir);

  std::vector<EpochLog> logs;
  std::vector<int> order(n);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle = Rng::Derive(config.seed, static_cast<uint64_t>(epoch));
    shuffle.Shuffle(order);

    EpochLog log;
    log.epoch = epoch;
    int batches = 0, correct = 0, gamma_columns = 0;
    for (int start = 0, batch = 0; start < n; start += config.batch_size, ++batch) {
      const int end = std::min(n, start + config.batch_size);
      std::vector<int> index(order.begin() + start, order.begin() + end);
      std::vector<int> gold;
      gold.reserve(index.size());
      for (int i : index) gold.push_back(labels[i]);
      try {
        Graph g;
        Forward f = forward(g, index);
        Var loss = model.Loss(g, f, gold);
        g.Backward(loss);
        GradientSet grads = g.ParameterGradients();
        const double norm = std::sqrt(grads.SquaredNorm());
        if (!std::isfinite(norm)) throw NumericError("non-finite gradient norm");
        SgdStep(model.params(), grads, config.learning_rate, config.clip_norm);

        log.loss += loss.scalar();
        if (f.reconstruction.valid()) log.reconstruction += f.reconstruction.scalar();
        log.grad_norm_mean += norm;
        log.grad_norm_max = std::max(log.grad_norm_max, norm);
        const Matrix& logits = f.logits.value();
        for (Eigen::Index b = 0; b < logits.cols(); ++b) {
          Eigen::Index best;
          logits.col(b).maxCoeff(&best);
          correct += best == gold[b];
        }
        if (f.fusion.gamma.valid()) {
          const Matrix& gamma = f.fusion.gamma.value();
          for (int j = 0; j < 3; ++j) log.gamma_mean[j] += gamma.row(j).sum();
          gamma_columns += static_cast<int>(gamma.cols());
        }
        ++batches;
      } catch (const NumericError& e) {
        WriteDiagnostics(config, model, epoch, batch, describe(index), e.what());
        throw NumericError("epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch) + ": " + e.what());
      }
    }
    log.loss /= batches;
    log.reconstruction /= batches;
    log.grad_norm_mean /= batches;
    log.accuracy = static_cast<double>(correct) / n;
    if (gamma_columns > 0) {
      for (double& m : log.gamma_mean) m /= gamma_columns;
    }
    if (!config.checkpoint_dir.empty()) {
      const std::filesystem::path dir(config.checkpoint_dir);
      const std::string tmp = (dir / "latest.ckpt.tmp").string();
      SaveParameters(model.params(), tmp);
      std::filesystem::rename(tmp, dir / "latest.ckpt");
      if (config.keep_all_checkpoints) {
        char name[32];
        std::snprintf(name, sizeof(name), "epoch-%03d.ckpt", epoch);
        std::filesystem::copy_file(dir / "latest.ckpt", dir / name,
                                   std::filesystem::copy_options::overwrite_existing);
      }
    }
    logs.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  return logs;
}

}  // namespace

std::vector<EpochLog> TrainText(Model& model, const std::vector<EntityPairSample>& samples,
                                const TrainConfig& config, const EpochCallback& on_epoch) {
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.relation);
  auto forward = [&](Graph& g, const std::vector<int>& index) {
    std::vector<const EntityPairSample*> batch;
    std::vector<int> queries;
    for (int i : index) {
      batch.push_back(&samples[i]);
      queries.push_back(samples[i].relation);
    }
    return model.Head(g, model.TextViews(g, batch, queries));
  };
  auto describe = [&](const std::vector<int>& index) {
    json out = json::array();
    for (int i : index) {
      out.push_back({{"index", i}, {"head", samples[i].head}, {"tail", samples[i].tail},
                     {"relation", samples[i].relation}, {"bag", samples[i].bag.size()}});
    }
    return out;
  };
  return Train(model, labels, config, forward, describe, on_epoch);
}

std::vector<EpochLog> TrainFeatures(Model& model, const std::vector<SynthSample>& samples,
                                    const TrainConfig& config, const EpochCallback& on_epoch) {
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.label);
  auto forward = [&](Graph& g, const std::vector<int>& index) {
    std::vector<const SynthSample*> batch;
    for (int i : index) batch.push_back(&samples[i]);
    return model.Head(g, model.FeatureViews(g, batch));
  };
  auto describe = [&](const std::vector<int>& index) {
    json out = json::array();
    for (int i : index) {
      out.push_back({{"index", i}, {"label", samples[i].label},
                     {"inflated_view", samples[i].inflated_view}});
    }
    return out;
  };
  return Train(model, labels, config, forward, describe, on_epoch);
}

double FeatureAccuracy(const Model& model, const std::vector<SynthSample>& samples,
                       int batch_size) {
  if (samples.empty()) throw DataError("accuracy: no samples");
  int correct = 0;
  for (size_t start = 0; start < samples.size(); start += batch_size) {
    const size_t end = std::min(samples.size(), start + batch_size);
    std::vector<const SynthSample*> batch;
    for (size_t i = start; i < end; ++i) batch.push_back(&samples[i]);
    const Matrix probs = model.ScoreFeatures(batch);
    for (Eigen::Index b = 0; b < probs.cols(); ++b) {
      Eigen::Index best;
      probs.col(b).maxCoeff(&best);
      correct += best == batch[b]->label;
    }
  }
  return static_cast<double>(correct) / samples.size();
}

}  // namespace mvre
