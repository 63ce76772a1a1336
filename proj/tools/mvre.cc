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


#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvre/data/synth.h"
#include "mvre/data/synth_corpus.h"
#include "mvre/errors.h"
#include "mvre/eval/config.h"
#include "mvre/eval/experiment.h"
#include "mvre/eval/manifest.h"
#include "mvre/eval/metrics.h"
#include "mvre/eval/plot.h"
#include "mvre/model/toy.h"
#include "mvre/numerics/checkpoint.h"

namespace mvre {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir = "out";
};

ExperimentConfig LoadConfig(const Globals& g) {
  return g.config_path.empty() ? ExperimentConfig() : LoadExperimentConfig(g.config_path);
}

// --seed replaces the data seed for data commands and the run seeds for
// training commands.
void ApplyDataSeed(const Globals& g, ExperimentConfig& c) {
  if (!g.seed) return;
  c.data_seed = *g.seed;
  c.encoding.seed = c.subsample.seed = c.synthetic.seed = c.corpus.seed = *g.seed;
}

void ApplyRunSeed(const Globals& g, ExperimentConfig& c) {
  if (g.seed) c.seeds = {*g.seed};
}

std::string Path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void SaveText(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

struct FeatureData {
  std::vector<SynthSample> train;
  std::vector<SynthSample> test;
};

FeatureData LoadFeatureData(const std::string& dir) {
  return {LoadSynthetic(Path(dir, "train.jsonl")), LoadSynthetic(Path(dir, "test.jsonl"))};
}

// ---- synth ----

int Synth(const Globals& g, const std::string& kind_flag) {
  ExperimentConfig c = LoadConfig(g);
  ApplyDataSeed(g, c);
  std::string kind = kind_flag;
  if (kind.empty()) kind = c.kind == ExperimentKind::kSynthetic ? "features" : "corpus";
  fs::create_directories(g.out_dir);
  if (kind == "features") {
    const SynthDataset data = SynthGenerate(c.synthetic);
    std::vector<SynthSample> train, test;
    SplitSynthetic(data, c.synthetic_test, &train, &test);
    SaveSynthetic(Path(g.out_dir, "train.jsonl"), train);
    SaveSynthetic(Path(g.out_dir, "test.jsonl"), test);
    std::printf("wrote %zu train and %zu test feature samples to %s\n", train.size(),
                test.size(), g.out_dir.c_str());
  } else if (kind == "corpus") {
    const SynthCorpus corpus = GenerateCorpus(c.corpus);
    WriteSynthCorpus(corpus, g.out_dir);
    std::printf("wrote %zu train and %zu test sentences, %zu relations to %s\n",
                corpus.train.size(), corpus.test.size(), corpus.relations.size(),
                g.out_dir.c_str());
  } else {
    throw ConfigError("synth --kind must be features or corpus");
  }
  WriteJson(Path(g.out_dir, "synth.json"), {{"kind", kind}, {"config", ConfigToJson(c)}});
  return 0;
}

// ---- ingest ----

int IngestCommand(const Globals& g, const std::string& corpus_dir,
                  const std::string& word_vectors) {
  ExperimentConfig c = LoadConfig(g);
  ApplyDataSeed(g, c);
  if (!word_vectors.empty()) c.word_vectors = word_vectors;
  const CorpusFiles files = CorpusFilesIn(corpus_dir);
  const TextData data = Ingest(files, c);
  SaveTextData(data, g.out_dir);
  std::vector<std::string> inputs = {files.train, files.test, files.descriptions, files.types,
                                     files.relations, c.word_vectors};
  WriteJson(Path(g.out_dir, "manifest.json"),
            {{"config", ConfigToJson(c)}, {"inputs", InputHashes(inputs)}, {"stats", data.stats}});
  std::printf("%zu train bags, %zu test pairs, %zu relations, %d words, %d types -> %s\n",
              data.train.size(), data.test.size(), data.relations.size(), data.vocab.words.size(),
              data.vocab.types.size(), g.out_dir.c_str());
  return 0;
}

// ---- train ----

void PrintEpoch(uint64_t seed, const EpochLog& log) {
  std::printf("seed %llu epoch %3d loss %.5f acc %.4f |g| %.3g gamma %.3f %.3f %.3f\n",
              static_cast<unsigned long long>(seed), log.epoch, log.loss, log.accuracy,
              log.grad_norm_mean, log.gamma_mean[0], log.gamma_mean[1], log.gamma_mean[2]);
  std::fflush(stdout);
}

int Train(const Globals& g, const std::string& data_dir, bool quiet) {
  ExperimentConfig c = LoadConfig(g);
  ApplyRunSeed(g, c);
  fs::create_directories(g.out_dir);
  WriteJson(Path(g.out_dir, "run.json"),
            {{"config", ConfigToJson(c)}, {"data", fs::absolute(data_dir).string()}});
  auto on_epoch = [&](uint64_t seed) {
    return [seed, quiet](const EpochLog& log) {
      if (!quiet) PrintEpoch(seed, log);
    };
  };
  for (uint64_t seed : c.seeds) {
    const std::string dir = Path(g.out_dir, "seed-" + std::to_string(seed));
    TrainConfig t = c.train;
    t.seed = seed;
    t.checkpoint_dir = dir;
    t.diagnostics_path = Path(dir, "diagnostics.json");
    std::vector<EpochLog> logs;
    if (c.kind == ExperimentKind::kSynthetic) {
      const FeatureData data = LoadFeatureData(data_dir);
      Model model(FeatureModelConfig(c), seed);
      logs = TrainFeatures(model, data.train, t, on_epoch(seed));
    } else {
      const TextData data = LoadTextData(data_dir);
      Model model(TextModelConfig(c, data), seed,
                  data.word_vectors.size() > 0 ? &data.word_vectors : nullptr);
      logs = TrainText(model, data.train, t, on_epoch(seed));
    }
    WriteJson(Path(dir, "manifest.json"), RunManifest(c, seed, {data_dir}, logs));
    std::printf("seed %llu: final loss %.5f, checkpoint %s\n",
                static_cast<unsigned long long>(seed), logs.back().loss,
                Path(dir, "latest.ckpt").c_str());
  }
  return 0;
}

// ---- eval ----

void PrintCurveMetrics(const char* label, double auc, double f1) {
  std::printf("%s AUC %.6f max F1 %.6f\n", label, auc, f1);
}

int EvalFiles(const Globals& g, const std::string& predictions_path,
              const std::string& facts_path, size_t top_k) {
  if (facts_path.empty()) throw ConfigError("eval --predictions also needs --facts");
  const std::vector<Prediction> preds = LoadPredictions(predictions_path);
  if (preds.empty()) {
    std::fprintf(stderr, "error: %s contains no predictions\n", predictions_path.c_str());
    return 1;
  }
  const std::vector<PrPoint> curve = PrCurve(preds, LoadFacts(facts_path), top_k);
  fs::create_directories(g.out_dir);
  SavePrCurve(Path(g.out_dir, "pr_curve.csv"), curve);
  const double auc = Auc(curve), f1 = MaxF1(curve);
  WriteJson(Path(g.out_dir, "metrics.json"),
            {{"predictions", predictions_path}, {"auc", auc}, {"max_f1", f1}});
  PrintCurveMetrics("predictions", auc, f1);
  return 0;
}

int EvalRun(const Globals& g, std::string run_dir, std::string data_dir, std::optional<size_t> top_k,
            const std::string& query) {
  if (run_dir.empty()) run_dir = g.out_dir;
  const json run = ReadJson(Path(run_dir, "run.json"));
  ExperimentConfig c = ConfigFromJson(run.at("config"));
  ApplyRunSeed(g, c);
  if (top_k) c.top_k = *top_k;
  if (query == "per-relation") c.model.query = InferenceQuery::kPerRelation;
  if (query == "mean-relation") c.model.query = InferenceQuery::kMeanRelation;
  if (data_dir.empty()) data_dir = run.at("data").get<std::string>();
  fs::create_directories(g.out_dir);
  std::vector<RunResult> results;
  if (c.kind == ExperimentKind::kSynthetic) {
    const FeatureData data = LoadFeatureData(data_dir);
    for (uint64_t seed : c.seeds) {
      Model model(FeatureModelConfig(c), seed);
      LoadParameters(model.params(), Path(Path(run_dir, "seed-" + std::to_string(seed)), "latest.ckpt"));
      RunResult r;
      r.seed = seed;
      r.accuracy = FeatureAccuracy(model, data.test);
      std::printf("seed %llu test accuracy %.6f\n", static_cast<unsigned long long>(seed), r.accuracy);
      results.push_back(std::move(r));
    }
  } else {
    const TextData data = LoadTextData(data_dir);
    SaveFacts(Path(g.out_dir, "facts.csv"), GoldFacts(data.test));
    for (uint64_t seed : c.seeds) {
      Model model(TextModelConfig(c, data), seed,
                  data.word_vectors.size() > 0 ? &data.word_vectors : nullptr);
      LoadParameters(model.params(), Path(Path(run_dir, "seed-" + std::to_string(seed)), "latest.ckpt"));
      TextEvaluation e = EvaluateText(model, data.test, c.top_k);
      const std::string suffix = "_seed" + std::to_string(seed) + ".csv";
      SavePrCurve(Path(g.out_dir, "pr_curve" + suffix), e.curve);
      SavePredictions(Path(g.out_dir, "predictions" + suffix), e.predictions);
      if (results.empty()) SavePrCurve(Path(g.out_dir, "pr_curve.csv"), e.curve);
      RunResult r;
      r.seed = seed;
      r.auc = e.auc;
      r.max_f1 = e.max_f1;
      PrintCurveMetrics(("seed " + std::to_string(seed)).c_str(), r.auc, r.max_f1);
      results.push_back(std::move(r));
    }
  }
  const std::string variant = FusionStrategyName(c.model.fusion.strategy);
  json metrics = MetricsJson(c.kind, variant, results);
  if (c.kind == ExperimentKind::kText) {
    metrics["query"] = c.model.query == InferenceQuery::kPerRelation ? "per-relation" : "mean-relation";
  }
  WriteJson(Path(g.out_dir, "metrics.json"), metrics);
  if (c.kind == ExperimentKind::kSynthetic) {
    std::printf("accuracy mean %.6f se %.6f median %.6f\n", metrics["accuracy"]["mean"].get<double>(),
                metrics["accuracy"]["se"].get<double>(), metrics["accuracy"]["median"].get<double>());
  } else {
    std::printf("AUC mean %.6f se %.6f; max F1 mean %.6f se %.6f\n",
                metrics["auc"]["mean"].get<double>(), metrics["auc"]["se"].get<double>(),
                metrics["max_f1"]["mean"].get<double>(), metrics["max_f1"]["se"].get<double>());
  }
  return 0;
}

// ---- ablate ----

void PrintCells(const std::vector<AblationCell>& cells) {
  std::printf("%-10s %-9s %10s %10s %10s\n", "variant", "metric", "mean", "se", "median");
  for (const AblationCell& cell : cells) {
    std::printf("%-10s %-9s %10.6f %10.6f %10.6f\n", cell.variant.c_str(), cell.metric.c_str(),
                cell.summary.mean, cell.summary.se, cell.summary.median);
  }
}

int Ablate(const Globals& g, const std::string& suite_name, const std::string& data_dir) {
  ExperimentConfig c = LoadConfig(g);
  ApplyRunSeed(g, c);
  const AblationSuite suite = ParseAblationSuite(suite_name);
  auto progress = [&c](const std::string& variant, const RunResult& r) {
    if (c.kind == ExperimentKind::kSynthetic) {
      std::printf("%s seed %llu accuracy %.6f\n", variant.c_str(),
                  static_cast<unsigned long long>(r.seed), r.accuracy);
    } else {
      std::printf("%s seed %llu AUC %.6f max F1 %.6f\n", variant.c_str(),
                  static_cast<unsigned long long>(r.seed), r.auc, r.max_f1);
    }
    std::fflush(stdout);
  };
  std::vector<AblationCell> cells;
  if (c.kind == ExperimentKind::kSynthetic) {
    const FeatureData data = LoadFeatureData(data_dir);
    cells = RunFeatureAblation(c, suite, data.train, data.test, progress);
  } else {
    cells = RunTextAblation(c, suite, LoadTextData(data_dir), progress);
  }
  const std::string path = Path(g.out_dir, "ablation_" + suite_name + ".csv");
  SaveText(path, AblationCsv(cells));
  PrintCells(cells);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

// ---- gradcheck ----

int GradCheck(const Globals& g, int seeds) {
  const uint64_t first = g.seed.value_or(1);
  double worst = 0.0;
  for (const GradientCase& gc : RunGradientSuite(ToyModelConfig(), seeds, first)) {
    const GradCheckReport& r = gc.report;
    std::printf("%s seed %llu: %zu entries, max relative error %.3e (%s[%lld])\n",
                gc.name.c_str(), static_cast<unsigned long long>(gc.seed), r.checked,
                r.max_relative_error, r.worst_parameter.c_str(),
                static_cast<long long>(r.worst_index));
    worst = std::max(worst, r.max_relative_error);
  }
  constexpr double kTolerance = 1e-4;
  std::printf("max relative error %.3e (tolerance %.0e): %s\n", worst, kTolerance,
              worst < kTolerance ? "ok" : "FAILED");
  return worst < kTolerance ? 0 : 1;
}

// ---- plot ----

int Plot(const Globals& g, const std::vector<std::string>& inputs, std::string output,
         const PlotOptions& options) {
  std::vector<PlotSeries> series;
  for (const std::string& input : inputs) {
    const size_t eq = input.find('=');
    const std::string path = eq == std::string::npos ? input : input.substr(eq + 1);
    const std::string label = eq == std::string::npos ? fs::path(path).stem().string() : input.substr(0, eq);
    series.push_back({label, LoadPrCurve(path)});
  }
  if (output.empty()) output = Path(g.out_dir, "pr_curve.svg");
  SaveText(output, PrCurveSvg(series, options));
  std::printf("wrote %s\n", output.c_str());
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Multi-view distantly supervised relation extraction"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Experiment config (TOML)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Data seed for synth/ingest, single run seed otherwise");
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();

  std::string kind;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--kind", kind, "features or corpus (default from the config kind)")
      ->check(CLI::IsMember({"features", "corpus"}));

  std::string corpus_dir, word_vectors;
  CLI::App* ingest = app.add_subcommand("ingest", "Corpus to encoded dataset and vocabulary");
  ingest->add_option("--corpus", corpus_dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("--word-vectors", word_vectors, "Pretrained word vectors (text format)");

  std::string data_dir;
  bool quiet = false;
  CLI::App* train = app.add_subcommand("train", "Train one model per seed");
  train->add_option("--data", data_dir, "Ingested or synthetic data directory")->required();
  train->add_flag("--quiet", quiet, "No per-epoch lines");

  std::string run_dir, eval_data, predictions, facts, query;
  std::optional<size_t> top_k;
  CLI::App* eval = app.add_subcommand("eval", "Held-out evaluation");
  eval->add_option("--run-dir", run_dir, "Training output (default: --out-dir)");
  eval->add_option("--data", eval_data, "Data directory (default: the one used for training)");
  eval->add_option("--predictions", predictions, "Score a predictions CSV directly");
  eval->add_option("--facts", facts, "Gold facts CSV for --predictions");
  eval->add_option("--top-k", top_k, "Truncate the PR curve");
  eval->add_option("--query", query, "Bag-attention query at inference (default: from the run)")
      ->check(CLI::IsMember({"per-relation", "mean-relation"}));

  std::string suite, ablate_data;
  CLI::App* ablate = app.add_subcommand("ablate", "Ablation suite over the configured seeds");
  ablate->add_option("--suite", suite, "views or fusion")->required();
  ablate->add_option("--data", ablate_data, "Ingested or synthetic data directory")->required();

  int seeds = 20;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference suite at toy dims");
  gradcheck->add_option("--seeds", seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<std::string> curves;
  std::string plot_output;
  PlotOptions plot_options;
  CLI::App* plot = app.add_subcommand("plot", "PR curve CSVs to SVG");
  plot->add_option("--input", curves, "[label=]pr_curve.csv, repeatable")->required();
  plot->add_option("--output", plot_output, "SVG path (default: <out-dir>/pr_curve.svg)");
  plot->add_option("--title", plot_options.title, "Plot title");
  plot->add_option("--max-recall", plot_options.max_recall, "Right end of the recall axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*synth) return Synth(g, kind);
    if (*ingest) return IngestCommand(g, corpus_dir, word_vectors);
    if (*train) return Train(g, data_dir, quiet);
    if (*eval) {
      if (!predictions.empty()) return EvalFiles(g, predictions, facts, top_k.value_or(0));
      return EvalRun(g, run_dir, eval_data, top_k, query);
    }
    if (*ablate) return Ablate(g, suite, ablate_data);
    if (*gradcheck) return GradCheck(g, seeds);
    if (*plot) return Plot(g, curves, plot_output, plot_options);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace
}  // namespace mvre

int main(int argc, char** argv) { return mvre::Main(argc, argv); }
