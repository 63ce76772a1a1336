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


#include "mvre/eval/experiment.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mvre/data/subsample.h"
#include "mvre/errors.h"
#include "mvre/numerics/checkpoint.h"
#include "mvre/numerics/random.h"

namespace mvre {

using nlohmann::json;
namespace fs = std::filesystem;

CorpusFiles CorpusFilesIn(const std::string& dir) {
  const fs::path root(dir);
  auto optional = [&](const char* name) {
    const fs::path p = root / name;
    return fs::exists(p) ? p.string() : std::string();
  };
  return {(root / "train.jsonl").string(), (root / "test.jsonl").string(),
          optional("descriptions.jsonl"), optional("types.jsonl"),
          (root / "relations.txt").string()};
}

namespace {

json StatsJson(const CorpusStats& s) {
  return {{"sentences", s.sentences},
          {"pairs", s.pairs},
          {"facts", s.facts},
          {"bags", s.bags},
          {"mean_types_per_entity", s.mean_types_per_entity},
          {"entities_with_description", s.entities_with_description}};
}

json EncodingJson(const EncodingConfig& e) {
  return {{"seq_len", e.seq_len},
          {"type_len", e.type_len},
          {"max_distance", e.max_distance},
          {"bag_cap", e.bag_cap},
          {"seed", e.seed}};
}

EncodingConfig EncodingFromJson(const json& j) {
  EncodingConfig e;
  e.seq_len = j.at("seq_len").get<int>();
  e.type_len = j.at("type_len").get<int>();
  e.max_distance = j.at("max_distance").get<int>();
  e.bag_cap = j.at("bag_cap").get<int>();
  e.seed = j.at("seed").get<uint64_t>();
  return e;
}

}  // namespace

TextData Ingest(const CorpusFiles& files, const ExperimentConfig& config) {
  const std::vector<std::string> relations = ReadRelations(files.relations);
  const SubsampledCorpus sub = Subsample(ReadSentences(files.train), ReadSentences(files.test),
                                         relations, config.subsample);
  std::map<std::string, std::vector<std::string>> descriptions, types;
  if (!files.descriptions.empty()) descriptions = ReadDescriptions(files.descriptions);
  if (!files.types.empty()) types = ReadTypes(files.types);
  const RawCorpus train = BuildCorpus(sub.train, sub.relations, descriptions, types,
                                      BagGrouping::kByPairAndRelation);
  const RawCorpus test = BuildCorpus(sub.test, sub.relations, std::move(descriptions),
                                     std::move(types), BagGrouping::kByPair);
  if (train.bags.empty()) throw DataError("ingest: no training bags left after subsampling");

  TextData data;
  data.relations = sub.relations;
  data.encoding = config.encoding;
  data.vocab = BuildVocab(train, config.min_count);
  data.train = EncodeCorpus(train, data.vocab, config.encoding);
  data.test = EncodeCorpus(test, data.vocab, config.encoding);
  if (!config.word_vectors.empty()) {
    Rng rng = Rng::Derive(config.data_seed, "word-vectors");
    size_t matched = 0;
    data.word_vectors = LoadWordVectors(config.word_vectors, data.vocab.words,
                                        config.model.encoder.word_dim, rng, &matched);
    data.stats["word_vectors_matched"] = matched;
  }
  data.stats["train"] = StatsJson(train.stats);
  data.stats["test"] = StatsJson(test.stats);
  data.stats["relations"] = data.relations.size();
  data.stats["words"] = data.vocab.words.size();
  data.stats["types"] = data.vocab.types.size();
  return data;
}

void SaveTextData(const TextData& data, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path root(dir);
  WriteRelations((root / "relations.txt").string(), data.relations);
  fs::create_directories(root / "vocab");
  SaveVocab(data.vocab, (root / "vocab").string());
  SaveSamples((root / "train.samples.jsonl").string(), data.train);
  SaveSamples((root / "test.samples.jsonl").string(), data.test);
  if (data.word_vectors.size() > 0) {
    WriteCheckpoint((root / "word_vectors.ckpt").string(), {{"emb/word", data.word_vectors}});
  }
  json info = {{"encoding", EncodingJson(data.encoding)}, {"stats", data.stats}};
  std::ofstream((root / "ingest.json").string()) << info.dump(2) << '\n';
}

TextData LoadTextData(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::exists(root / "ingest.json")) {
    throw DataError(dir + " is not an ingested data directory (no ingest.json)");
  }
  TextData data;
  json info;
  try {
    info = json::parse(std::ifstream((root / "ingest.json").string()));
  } catch (const json::exception& e) {
    throw DataError((root / "ingest.json").string() + ": " + e.what());
  }
  data.encoding = EncodingFromJson(info.at("encoding"));
  data.stats = info.value("stats", json::object());
  data.relations = ReadRelations((root / "relations.txt").string());
  data.vocab = LoadVocab((root / "vocab").string());
  data.train = LoadSamples((root / "train.samples.jsonl").string());
  data.test = LoadSamples((root / "test.samples.jsonl").string());
  if (fs::exists(root / "word_vectors.ckpt")) {
    data.word_vectors = ReadCheckpoint((root / "word_vectors.ckpt").string()).at(0).value;
  }
  return data;
}

ModelConfig TextModelConfig(const ExperimentConfig& config, const TextData& data) {
  const EncodingConfig& a = config.encoding;
  const EncodingConfig& b = data.encoding;
  if (a.seq_len != b.seq_len || a.type_len != b.type_len || a.max_distance != b.max_distance) {
    throw ConfigError("encoding settings differ from the ones the data was ingested with");
  }
  ModelConfig m = config.model;
  m.input = InputKind::kText;
  m.encoder.words = data.vocab.words.size();
  m.encoder.types = data.vocab.types.size();
  m.encoder.positions = b.position_vocab();
  m.encoder.relations = static_cast<int>(data.relations.size());
  return m;
}

ModelConfig FeatureModelConfig(const ExperimentConfig& config) {
  ModelConfig m = config.model;
  m.input = InputKind::kFeatures;
  m.encoder.d_model = m.fusion.d_model = config.synthetic.d_view;
  m.encoder.relations = config.synthetic.n_relations;
  return m;
}

TextEvaluation EvaluateText(const Model& model, const std::vector<EntityPairSample>& test,
                            size_t top_k, int batch_size) {
  TextEvaluation out;
  for (size_t start = 0; start < test.size(); start += static_cast<size_t>(batch_size)) {
    const size_t end = std::min(test.size(), start + static_cast<size_t>(batch_size));
    std::vector<const EntityPairSample*> batch;
    for (size_t i = start; i < end; ++i) batch.push_back(&test[i]);
    std::vector<Prediction> part =
        PredictionsFromScores(model.ScoreAllRelations(batch), static_cast<int>(start));
    out.predictions.insert(out.predictions.end(), part.begin(), part.end());
  }
  out.curve = PrCurve(out.predictions, GoldFacts(test), top_k);
  out.auc = Auc(out.curve);
  out.max_f1 = MaxF1(out.curve);
  return out;
}

namespace {

TrainConfig RunTrainConfig(const ExperimentConfig& config, uint64_t seed,
                           const std::string& checkpoint_dir) {
  TrainConfig t = config.train;
  t.seed = seed;
  t.checkpoint_dir = checkpoint_dir;
  if (!checkpoint_dir.empty()) {
    t.diagnostics_path = (fs::path(checkpoint_dir) / "diagnostics.json").string();
  }
  return t;
}

}  // namespace

RunResult RunFeatures(const ExperimentConfig& config, const ModelConfig& model_config,
                      const std::vector<SynthSample>& train,
                      const std::vector<SynthSample>& test, uint64_t seed,
                      const std::string& checkpoint_dir) {
  Model model(model_config, seed);
  RunResult r;
  r.seed = seed;
  r.logs = TrainFeatures(model, train, RunTrainConfig(config, seed, checkpoint_dir));
  r.accuracy = FeatureAccuracy(model, test);
  return r;
}

RunResult RunText(const ExperimentConfig& config, const ModelConfig& model_config,
                  const TextData& data, uint64_t seed, const std::string& checkpoint_dir) {
  Model model(model_config, seed, data.word_vectors.size() > 0 ? &data.word_vectors : nullptr);
  RunResult r;
  r.seed = seed;
  r.logs = TrainText(model, data.train, RunTrainConfig(config, seed, checkpoint_dir));
  TextEvaluation e = EvaluateText(model, data.test, config.top_k);
  r.auc = e.auc;
  r.max_f1 = e.max_f1;
  r.curve = std::move(e.curve);
  r.predictions = std::move(e.predictions);
  return r;
}

Summary Summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / n;
  if (values.size() > 1) {
    double square = 0.0;
    for (double v : values) square += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(square / (n - 1.0)) / std::sqrt(n);
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
  return s;
}

namespace {

json SummaryJson(const Summary& s) {
  return {{"mean", s.mean}, {"se", s.se}, {"median", s.median}};
}

}  // namespace

json EpochLogsJson(const std::vector<EpochLog>& logs) {
  json out = json::array();
  for (const EpochLog& l : logs) {
    out.push_back({{"epoch", l.epoch},
                   {"loss", l.loss},
                   {"accuracy", l.accuracy},
                   {"reconstruction", l.reconstruction},
                   {"grad_norm_mean", l.grad_norm_mean},
                   {"grad_norm_max", l.grad_norm_max},
                   {"gamma_mean", l.gamma_mean}});
  }
  return out;
}

json MetricsJson(ExperimentKind kind, const std::string& variant,
                 const std::vector<RunResult>& runs) {
  json per_seed = json::array();
  std::vector<double> accuracy, auc, f1;
  for (const RunResult& r : runs) {
    json entry = {{"seed", r.seed}};
    if (!r.logs.empty()) {
      entry["final_train_loss"] = r.logs.back().loss;
      entry["final_train_accuracy"] = r.logs.back().accuracy;
    }
    if (kind == ExperimentKind::kSynthetic) {
      entry["accuracy"] = r.accuracy;
      accuracy.push_back(r.accuracy);
    } else {
      entry["auc"] = r.auc;
      entry["max_f1"] = r.max_f1;
      auc.push_back(r.auc);
      f1.push_back(r.max_f1);
    }
    per_seed.push_back(entry);
  }
  json out = {{"kind", kind == ExperimentKind::kSynthetic ? "synthetic" : "text"},
              {"variant", variant},
              {"runs", per_seed}};
  if (kind == ExperimentKind::kSynthetic) {
    out["accuracy"] = SummaryJson(Summarize(accuracy));
  } else {
    out["auc"] = SummaryJson(Summarize(auc));
    out["max_f1"] = SummaryJson(Summarize(f1));
  }
  return out;
}

AblationSuite ParseAblationSuite(const std::string& name) {
  if (name == "views") return AblationSuite::kViews;
  if (name == "fusion") return AblationSuite::kFusion;
  throw ConfigError("unknown ablation suite '" + name + "' (expected views or fusion)");
}

std::vector<AblationVariant> AblationVariants(AblationSuite suite, const ModelConfig& base) {
  std::vector<AblationVariant> out;
  auto add = [&](const std::string& name, auto edit) {
    ModelConfig m = base;
    edit(m);
    if (!m.fusion.UsesIntactSpace()) m.lambda = 0.0;
    out.push_back({name, m});
  };
  if (suite == AblationSuite::kViews) {
    const std::array<std::pair<const char*, std::array<bool, 3>>, 7> sets = {{
        {"v1", {true, false, false}},
        {"v2", {false, true, false}},
        {"v3", {false, false, true}},
        {"no-v1", {false, true, true}},
        {"no-v2", {true, false, true}},
        {"no-v3", {true, true, false}},
        {"all", {true, true, true}},
    }};
    for (const auto& [name, present] : sets) {
      add(name, [&](ModelConfig& m) { m.fusion.present = present; });
    }
    return out;
  }
  add("mv-avg", [](ModelConfig& m) { m.fusion.strategy = FusionStrategy::kMvAvg; });
  add("mv-att", [](ModelConfig& m) { m.fusion.strategy = FusionStrategy::kMvAtt; });
  if (base.input == InputKind::kText) {
    add("no-rat", [](ModelConfig& m) {
      m.fusion.strategy = FusionStrategy::kInsrl;
      m.encoder.use_rat = false;
    });
  }
  add("insrl-avg", [](ModelConfig& m) { m.fusion.strategy = FusionStrategy::kInsrlAvg; });
  add("insrl", [](ModelConfig& m) { m.fusion.strategy = FusionStrategy::kInsrl; });
  return out;
}

namespace {

AblationCell Cell(const std::string& variant, const std::string& metric,
                  const std::vector<RunResult>& runs, double RunResult::*field) {
  AblationCell c;
  c.variant = variant;
  c.metric = metric;
  for (const RunResult& r : runs) {
    c.seeds.push_back(r.seed);
    c.values.push_back(r.*field);
  }
  c.summary = Summarize(c.values);
  return c;
}

}  // namespace

std::vector<AblationCell> RunFeatureAblation(const ExperimentConfig& config, AblationSuite suite,
                                             const std::vector<SynthSample>& train,
                                             const std::vector<SynthSample>& test,
                                             const AblationProgress& progress) {
  std::vector<AblationCell> cells;
  for (const AblationVariant& v : AblationVariants(suite, FeatureModelConfig(config))) {
    std::vector<RunResult> runs;
    for (uint64_t seed : config.seeds) {
      runs.push_back(RunFeatures(config, v.model, train, test, seed));
      if (progress) progress(v.name, runs.back());
    }
    cells.push_back(Cell(v.name, "accuracy", runs, &RunResult::accuracy));
  }
  return cells;
}

std::vector<AblationCell> RunTextAblation(const ExperimentConfig& config, AblationSuite suite,
                                          const TextData& data,
                                          const AblationProgress& progress) {
  std::vector<AblationCell> cells;
  for (const AblationVariant& v : AblationVariants(suite, TextModelConfig(config, data))) {
    std::vector<RunResult> runs;
    for (uint64_t seed : config.seeds) {
      runs.push_back(RunText(config, v.model, data, seed));
      runs.back().predictions.clear();
      if (progress) progress(v.name, runs.back());
    }
    cells.push_back(Cell(v.name, "auc", runs, &RunResult::auc));
    cells.push_back(Cell(v.name, "max_f1", runs, &RunResult::max_f1));
  }
  return cells;
}

std::string AblationCsv(const std::vector<AblationCell>& cells) {
  std::ostringstream out;
  out << "variant,metric,mean,se,median";
  if (!cells.empty()) {
    for (uint64_t s : cells.front().seeds) out << ",seed_" << s;
  }
  out << '\n';
  for (const AblationCell& c : cells) {
    out << c.variant << ',' << c.metric << ',' << FormatDouble(c.summary.mean) << ','
        << FormatDouble(c.summary.se) << ',' << FormatDouble(c.summary.median);
    for (double v : c.values) out << ',' << FormatDouble(v);
    out << '\n';
  }
  return out.str();
}

}  // namespace mvre
