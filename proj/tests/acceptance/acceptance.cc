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


#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvre/data/vocab.h"
#include "mvre/encoders/encoders.h"
#include "mvre/eval/config.h"
#include "mvre/eval/experiment.h"
#include "mvre/eval/metrics.h"
#include "mvre/fusion/fusion.h"
#include "mvre/model/toy.h"
#include "mvre/numerics/ops.h"
#include "mvre/numerics/random.h"
#include "mvre/views/views.h"
#include "oracles.h"

namespace mvre {
namespace {

namespace fs = std::filesystem;

// Tolerances and budgets of the acceptance criteria.
constexpr double kGradTolerance = 1e-4;
constexpr int kGradSeeds = 20;
constexpr double kGradBudget = 120.0;
constexpr int kClosedFormInstances = 50;
constexpr double kClosedFormTolerance = 1e-6;
constexpr double kStationarityTolerance = 1e-8;
constexpr double kClosedFormBudget = 60.0;
constexpr int kAttentionForwards = 1000;
constexpr double kSumTolerance = 1e-6;
constexpr double kSymmetricTolerance = 1e-9;
// Invariances are checked to rounding level: reordering a sum can move the
// last bits, so bitwise equality is not required.
constexpr double kInvarianceTolerance = 1e-12;
constexpr int kMetricCases = 200;
constexpr double kSyntheticAccuracy = 0.90;
constexpr double kOrderingTie = 0.005;
constexpr double kSyntheticBudget = 900.0;
constexpr double kMiniBudget = 7200.0;

struct Setup {
  std::string source_dir = MVRE_SOURCE_DIR;
  std::string cli = MVRE_CLI_PATH;
  std::string work_dir = "acceptance_work";
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Format(const char* fmt, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), fmt, args...);
  return buffer;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// ---- 1: gradient suite ----

Outcome GradientSuite(const Setup&) {
  Timer timer;
  double worst = 0.0;
  std::string where;
  for (const GradientCase& c : RunGradientSuite(ToyModelConfig(), kGradSeeds)) {
    if (c.report.max_relative_error >= worst) {
      worst = c.report.max_relative_error;
      where = Format("seed %llu %s", static_cast<unsigned long long>(c.seed),
                     c.report.worst_parameter.c_str());
    }
  }
  const double seconds = timer.Seconds();
  return {worst < kGradTolerance && seconds < kGradBudget,
          Format("max relative error %.2e (%s) over %d seeds, tolerance %.0e; %.1f s of %.0f s",
                 worst, where.c_str(), kGradSeeds, kGradTolerance, seconds, kGradBudget)};
}

// ---- 2: closed-form oracle ----

Outcome ClosedForm(const Setup&) {
  Timer timer;
  Rng rng(2026);
  double worst_gap = 0.0, worst_residual = 0.0;
  for (int trial = 0; trial < kClosedFormInstances; ++trial) {
    const int d = 1 + static_cast<int>(rng.Below(8));
    const int d_x = d + 1 + static_cast<int>(rng.Below(static_cast<uint64_t>(16 - d)));
    std::vector<Eigen::MatrixXd> hats;
    std::vector<Eigen::VectorXd> views;
    std::vector<double> gamma;
    ParameterStore store;
    ViewVars vars;
    Graph g;
    for (int j = 0; j < 3; ++j) {
      hats.push_back(rng.GaussianMatrix(d, d_x, 1.0 / std::sqrt(d)));
      views.push_back(rng.GaussianMatrix(d, 1, 1.0));
      gamma.push_back(rng.Uniform(0.05, 1.0));
      store.Add("fusion/W_hat" + std::to_string(j + 1), hats[j]);
      vars[j] = g.Constant(views[j]);
    }
    const double total = gamma[0] + gamma[1] + gamma[2];
    Matrix gm(3, 1);
    for (int j = 0; j < 3; ++j) gm(j, 0) = gamma[j] /= total;
    const double ridge = std::pow(10.0, rng.Uniform(-4.0, -1.0));
    const Eigen::VectorXd x =
        IntactClosedForm(g, store, vars, g.Constant(gm), {true, true, true}, ridge).value().col(0);
    const Eigen::VectorXd iterative = oracle::IterativeIntactMinimizer(hats, views, gamma, ridge);
    worst_gap = std::max(worst_gap, (x - iterative).cwiseAbs().maxCoeff());
    worst_residual =
        std::max(worst_residual, oracle::IntactGradient(hats, views, gamma, ridge, x).norm());
  }
  const double seconds = timer.Seconds();
  return {worst_gap < kClosedFormTolerance && worst_residual < kStationarityTolerance &&
              seconds < kClosedFormBudget,
          Format("%d instances: max gap to iterative minimizer %.2e (< %.0e), stationarity "
                 "residual %.2e (< %.0e); %.2f s of %.0f s",
                 kClosedFormInstances, worst_gap, kClosedFormTolerance, worst_residual,
                 kStationarityTolerance, seconds, kClosedFormBudget)};
}

// ---- 3: attention invariants ----

// Largest |sum - 1| over the segments of a 1 x N weight row, skipping
// segments whose mask is all zero.
double SegmentSumError(const Matrix& w, const std::vector<int>& offsets) {
  double worst = 0.0;
  for (size_t s = 0; s + 1 < offsets.size(); ++s) {
    const double sum = w.middleCols(offsets[s], offsets[s + 1] - offsets[s]).sum();
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double ColumnSumError(const Matrix& m) {
  return (m.colwise().sum().array() - 1.0).abs().maxCoeff();
}

std::vector<int> EvenOffsets(int count, int length) {
  std::vector<int> offsets(count + 1);
  for (int s = 0; s <= count; ++s) offsets[s] = s * length;
  return offsets;
}

Var EncodeWithAttention(Graph& g, const Model& model, const SequenceEncoder& encoder, Var embedded,
                        int length, const std::vector<char>& mask, Var r_hat, Var* alpha) {
  const ParameterStore& store = model.params();
  Var x = MaskColumns(embedded, mask);
  if (encoder.with_conv()) x = encoder.ConvBlock(g, store, x, length, mask);
  x = encoder.SelfAttentionBlock(g, store, x, length, mask);
  return encoder.RelationAwarePool(g, store, x, length, mask, r_hat, alpha);
}

Outcome AttentionInvariants(const Setup&) {
  const ModelConfig config = ToyModelConfig();
  const EncodingConfig encoding = ToyEncodingConfig();
  double alpha_err = 0.0, beta_err = 0.0, gamma_err = 0.0, row_err = 0.0;
  double gamma_sym = 0.0, beta_sym = 0.0, perm_gap = 0.0, pad_gap = 0.0;
  bool scores_open = true;
  for (int f = 0; f < kAttentionForwards; ++f) {
    const uint64_t seed = static_cast<uint64_t>(f) + 1;
    Model model(config, seed);
    const ParameterStore& store = model.params();
    Rng rng = Rng::Derive(seed, "acceptance-attention");
    const int batch = 1 + f % 3;
    const std::vector<EntityPairSample> samples = ToySamples(config, encoding, batch, seed);
    std::vector<const EntityPairSample*> ptrs;
    std::vector<const EncodedSentence*> sentences;
    std::vector<int> bag_offsets = {0};
    std::vector<int> queries;
    for (const EntityPairSample& s : samples) {
      ptrs.push_back(&s);
      for (const EncodedSentence& e : s.bag) sentences.push_back(&e);
      bag_offsets.push_back(static_cast<int>(sentences.size()));
      queries.push_back(static_cast<int>(rng.Below(static_cast<uint64_t>(config.relations()))));
    }
    Graph g(false);
    Var r_hat = MeanRelation(g, store);

    // Relation-aware pooling weights of sentences and type sets.
    const SequenceBatch sb = MakeSentenceBatch(sentences);
    Var alpha;
    Var pooled = EncodeWithAttention(g, model, model.sentence_encoder(), EmbedSequence(g, store, sb),
                                     sb.length, sb.mask, r_hat, &alpha);
    alpha_err = std::max(alpha_err, SegmentSumError(alpha.value(), EvenOffsets(sb.count, sb.length)));
    std::vector<const EncodedTypeSet*> sets;
    for (const EntityPairSample& s : samples) sets.push_back(&s.head_types);
    const TypeBatch tb = MakeTypeBatch(sets);
    Var type_alpha;
    EncodeWithAttention(g, model, model.head_type_encoder(), EmbedTypes(g, store, tb), tb.length,
                        tb.mask, r_hat, &type_alpha);
    alpha_err =
        std::max(alpha_err, SegmentSumError(type_alpha.value(), EvenOffsets(tb.count, tb.length)));

    // Bag attention.
    const BagAttention bag = AttendBag(g, store, pooled, bag_offsets, queries);
    beta_err = std::max(beta_err, SegmentSumError(bag.weights.value(), bag_offsets));

    // View attention and classifier rows.
    const ViewVars views = model.TextViews(g, ptrs, queries);
    gamma_err = std::max(gamma_err, ColumnSumError(
        ViewAttention(g, store, views, config.fusion.present, r_hat).value()));
    const Forward forward = model.Head(g, views);
    row_err = std::max(row_err, ColumnSumError(SoftmaxColumns(forward.logits).value()));
    const Matrix scores = model.ScoreAllRelations(ptrs);
    scores_open = scores_open && scores.minCoeff() > 0.0 && scores.maxCoeff() < 1.0;

    // Symmetric inputs: identical views, a bag of identical sentences.
    Var same = g.Constant(rng.GaussianMatrix(config.encoder.d_model, batch, 1.0));
    const Matrix uniform_gamma =
        ViewAttention(g, store, {same, same, same}, {true, true, true}, r_hat).value();
    gamma_sym = std::max(gamma_sym, (uniform_gamma.array() - 1.0 / 3.0).abs().maxCoeff());
    const int m = 2 + f % 4;
    Var copies = RepeatColumn(g.Constant(rng.GaussianMatrix(config.encoder.d_model, 1, 1.0)), m);
    const std::vector<int> one_bag = {0, m};
    const std::vector<int> query = {queries[0]};
    const Matrix beta = AttendBag(g, store, copies, one_bag, query).weights.value();
    beta_sym = std::max(beta_sym, (beta.array() - 1.0 / m).abs().maxCoeff());

    // Type-set permutation and pad extension.
    EncodedTypeSet shuffled = samples[0].head_types;
    rng.Shuffle(shuffled.types);
    const TypeBatch ta = MakeTypeBatch({&samples[0].head_types});
    const TypeBatch tp = MakeTypeBatch({&shuffled});
    const SequenceEncoder& trl = model.head_type_encoder();
    const Matrix a = trl.Encode(g, store, EmbedTypes(g, store, ta), ta.length, ta.mask, r_hat).value();
    const Matrix p = trl.Encode(g, store, EmbedTypes(g, store, tp), tp.length, tp.mask, r_hat).value();
    perm_gap = std::max(perm_gap, (a - p).cwiseAbs().maxCoeff());

    EncodedSentence extended = samples[0].bag[0];
    const int extra = 1 + f % 5;
    extended.tokens.resize(extended.tokens.size() + extra, kPadWord);
    extended.head_positions.resize(extended.tokens.size(), encoding.position_pad());
    extended.tail_positions.resize(extended.tokens.size(), encoding.position_pad());
    const SequenceBatch sa = MakeSentenceBatch({&samples[0].bag[0]});
    const SequenceBatch se = MakeSentenceBatch({&extended});
    const SequenceEncoder& srl = model.sentence_encoder();
    const Matrix u = srl.Encode(g, store, EmbedSequence(g, store, sa), sa.length, sa.mask, r_hat).value();
    const Matrix v = srl.Encode(g, store, EmbedSequence(g, store, se), se.length, se.mask, r_hat).value();
    pad_gap = std::max(pad_gap, (u - v).cwiseAbs().maxCoeff());
  }
  const bool sums = std::max({alpha_err, beta_err, gamma_err, row_err}) <= kSumTolerance;
  const bool symmetric = gamma_sym <= kSymmetricTolerance && beta_sym <= kSymmetricTolerance;
  const bool invariant = perm_gap <= kInvarianceTolerance && pad_gap <= kInvarianceTolerance;
  return {sums && symmetric && invariant && scores_open,
          Format("%d forwards: |sum-1| alpha %.1e beta %.1e gamma %.1e rows %.1e (<= %.0e); "
                 "symmetric gamma %.1e beta %.1e (<= %.0e); permutation %.1e pad %.1e (<= %.0e); "
                 "scores in (0,1): %s",
                 kAttentionForwards, alpha_err, beta_err, gamma_err, row_err, kSumTolerance,
                 gamma_sym, beta_sym, kSymmetricTolerance, perm_gap, pad_gap, kInvarianceTolerance,
                 scores_open ? "yes" : "no")};
}

// ---- 4: metric oracles ----

bool Before(const Prediction& a, const Prediction& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.pair != b.pair) return a.pair < b.pair;
  return a.relation < b.relation;
}

// Brute force: every prefix recounted from the ranked list.
std::vector<PrPoint> OracleCurve(const std::vector<Prediction>& preds, const FactSet& gold) {
  std::vector<Prediction> ranked = preds;
  for (size_t i = 0; i < ranked.size(); ++i) {
    for (size_t j = i + 1; j < ranked.size(); ++j) {
      if (Before(ranked[j], ranked[i])) std::swap(ranked[i], ranked[j]);
    }
  }
  std::vector<PrPoint> curve;
  for (size_t k = 1; k <= ranked.size(); ++k) {
    size_t hits = 0;
    for (size_t i = 0; i < k; ++i) hits += gold.count({ranked[i].pair, ranked[i].relation});
    curve.push_back({static_cast<double>(hits) / static_cast<double>(gold.size()),
                     static_cast<double>(hits) / static_cast<double>(k)});
  }
  return curve;
}

double OracleAuc(const std::vector<PrPoint>& c) {
  double area = (c[0].recall - 0.0) * (c[0].precision + c[0].precision) / 2.0;
  for (size_t i = 1; i < c.size(); ++i) {
    area += (c[i].recall - c[i - 1].recall) * (c[i].precision + c[i - 1].precision) / 2.0;
  }
  return area;
}

double OracleMaxF1(const std::vector<PrPoint>& c) {
  double best = 0.0;
  for (const PrPoint& p : c) {
    if (p.precision + p.recall == 0.0) continue;
    best = std::max(best, 2.0 * p.precision * p.recall / (p.precision + p.recall));
  }
  return best;
}

Outcome MetricOracles(const Setup&) {
  Rng rng(404);
  int mismatches = 0, perfect_failures = 0;
  for (int trial = 0; trial < kMetricCases; ++trial) {
    const int pairs = 1 + static_cast<int>(rng.Below(15));
    const int relations = 2 + static_cast<int>(rng.Below(5));
    const int levels = 2 + static_cast<int>(rng.Below(30));
    std::vector<Prediction> preds;
    FactSet gold;
    for (int p = 0; p < pairs; ++p) {
      for (int r = 1; r < relations; ++r) {
        if (rng.Uniform() < 0.3) gold.insert({p, r});
        if (rng.Uniform() < 0.7) {
          preds.push_back({p, r, static_cast<double>(1 + rng.Below(levels)) / (levels + 1)});
        }
      }
    }
    if (preds.empty()) preds.push_back({0, 1, 0.5});
    if (gold.empty()) gold.insert({pairs, 1});
    const std::vector<PrPoint> curve = PrCurve(preds, gold);
    const std::vector<PrPoint> oracle = OracleCurve(preds, gold);
    bool same = curve.size() == oracle.size();
    for (size_t k = 0; same && k < curve.size(); ++k) {
      same = curve[k].recall == oracle[k].recall && curve[k].precision == oracle[k].precision;
    }
    same = same && Auc(curve) == OracleAuc(oracle) && MaxF1(curve) == OracleMaxF1(oracle);
    mismatches += same ? 0 : 1;

    // Perfect ranking: every gold fact above every wrong prediction.
    std::vector<Prediction> perfect;
    for (const auto& [p, r] : gold) perfect.push_back({p, r, 0.6 + 0.3 * rng.Uniform()});
    const int wrong = static_cast<int>(rng.Below(20));
    for (int i = 0; i < wrong; ++i) perfect.push_back({pairs + 1 + i, 1, 0.5 * rng.Uniform()});
    rng.Shuffle(perfect);
    const std::vector<PrPoint> best = PrCurve(perfect, gold);
    perfect_failures += Auc(best) == 1.0 && MaxF1(best) == 1.0 ? 0 : 1;
  }
  return {mismatches == 0 && perfect_failures == 0,
          Format("%d random sets: %d differ from the brute-force oracles (exact comparison); "
                 "%d perfect rankings not exactly 1.0",
                 kMetricCases, mismatches, perfect_failures)};
}

// ---- 5: synthetic end-to-end ----

ExperimentConfig SyntheticConfig(const Setup& s) {
  return LoadExperimentConfig(s.source_dir + "/configs/synthetic.toml");
}

Outcome SyntheticEndToEnd(const Setup& s) {
  Timer timer;
  const ExperimentConfig config = SyntheticConfig(s);
  const SynthDataset data = SynthGenerate(config.synthetic);
  std::vector<SynthSample> train, test;
  SplitSynthetic(data, config.synthetic_test, &train, &test);
  std::map<std::string, std::vector<double>> accuracy;
  for (const AblationVariant& v : AblationVariants(AblationSuite::kFusion, FeatureModelConfig(config))) {
    if (v.name != "insrl" && v.name != "insrl-avg" && v.name != "mv-avg") continue;
    for (uint64_t seed : config.seeds) {
      accuracy[v.name].push_back(RunFeatures(config, v.model, train, test, seed).accuracy);
    }
  }
  const double seconds = timer.Seconds();
  const double insrl_min = *std::min_element(accuracy["insrl"].begin(), accuracy["insrl"].end());
  const double m_insrl = Median(accuracy["insrl"]);
  const double m_avg = Median(accuracy["insrl-avg"]);
  const double m_mv = Median(accuracy["mv-avg"]);
  const bool ordered = m_insrl >= m_avg - kOrderingTie && m_avg >= m_mv - kOrderingTie;
  return {insrl_min >= kSyntheticAccuracy && ordered && seconds < kSyntheticBudget,
          Format("%zu train / %zu test: InSRL worst-seed test accuracy %.4f (>= %.2f); medians "
                 "InSRL %.4f, InSRL-AVG %.4f, MV-AVG %.4f (ordering, ties %.3f): %s; %.0f s of %.0f s",
                 train.size(), test.size(), insrl_min, kSyntheticAccuracy, m_insrl, m_avg, m_mv,
                 kOrderingTie, ordered ? "holds" : "violated", seconds, kSyntheticBudget)};
}

// ---- 6 and 7 drive the command-line tool ----

bool Run(const Setup& s, const std::string& args, const std::string& log) {
  const std::string command = "\"" + s.cli + "\" " + args + " >> \"" + log + "\" 2>&1";
  std::ofstream(log, std::ios::app) << "$ mvre " << args << '\n';
  return std::system(command.c_str()) == 0;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct CsvCell {
  std::string variant, metric;
  double median = 0.0;
};

std::vector<CsvCell> ReadAblation(const std::string& path) {
  std::vector<CsvCell> cells;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string variant, metric, mean, se, median;
    std::getline(ss, variant, ',');
    std::getline(ss, metric, ',');
    std::getline(ss, mean, ',');
    std::getline(ss, se, ',');
    std::getline(ss, median, ',');
    cells.push_back({variant, metric, std::stod(median)});
  }
  return cells;
}

Outcome MiniNyt(const Setup& s) {
  Timer timer;
  const std::string dir = s.work_dir + "/mini-nyt";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string log = dir + "/pipeline.log";
  const std::string config = "--config \"" + s.source_dir + "/configs/nyt-mini.toml\" ";
  const std::vector<std::pair<std::string, std::string>> steps = {
      {"synth", config + "--out-dir " + dir + "/corpus synth"},
      {"ingest", config + "--out-dir " + dir + "/data ingest --corpus " + dir + "/corpus"},
      {"train", config + "--out-dir " + dir + "/run train --quiet --data " + dir + "/data"},
      {"eval", "--out-dir " + dir + "/run eval"},
      {"ablate", config + "--out-dir " + dir + "/ablate ablate --suite fusion --data " + dir + "/data"},
  };
  for (const auto& [name, args] : steps) {
    if (!Run(s, args, log)) return {false, name + " failed; see " + log};
  }
  const double seconds = timer.Seconds();
  const ExperimentConfig c = LoadExperimentConfig(s.source_dir + "/configs/nyt-mini.toml");
  bool monotone = true;
  size_t curves = 0;
  for (uint64_t seed : c.seeds) {
    const std::vector<PrPoint> curve =
        LoadPrCurve(dir + "/run/pr_curve_seed" + std::to_string(seed) + ".csv");
    ++curves;
    for (size_t k = 1; k < curve.size(); ++k) monotone = monotone && curve[k].recall >= curve[k - 1].recall;
  }
  const bool metrics = fs::exists(dir + "/run/metrics.json") && fs::exists(dir + "/run/pr_curve.csv");
  double insrl = -1.0, mv_avg = -1.0;
  for (const CsvCell& cell : ReadAblation(dir + "/ablate/ablation_fusion.csv")) {
    if (cell.metric != "auc") continue;
    if (cell.variant == "insrl") insrl = cell.median;
    if (cell.variant == "mv-avg") mv_avg = cell.median;
  }
  return {monotone && metrics && insrl > mv_avg && seconds < kMiniBudget,
          Format("pipeline ok; %zu PR curves with monotone recall: %s; median AUC InSRL %.4f vs "
                 "MV-AVG %.4f; %.0f s of %.0f s",
                 curves, monotone ? "yes" : "no", insrl, mv_avg, seconds, kMiniBudget)};
}

Outcome Determinism(const Setup& s) {
  const std::string dir = s.work_dir + "/determinism";
  fs::remove_all(dir);
  const std::string config = "--config \"" + s.source_dir + "/configs/synthetic.toml\" ";
  std::vector<std::string> metrics;
  for (const char* attempt : {"a", "b"}) {
    const std::string root = dir + "/" + attempt;
    fs::create_directories(root);
    const std::string log = root + "/pipeline.log";
    if (!Run(s, config + "--out-dir " + root + "/data synth", log) ||
        !Run(s, config + "--out-dir " + root + "/run train --quiet --data " + root + "/data", log) ||
        !Run(s, "--out-dir " + root + "/run eval", log)) {
      return {false, std::string("pipeline failed; see ") + log};
    }
    metrics.push_back(ReadFile(root + "/run/metrics.json"));
  }
  const bool same = !metrics[0].empty() && metrics[0] == metrics[1];
  return {same, Format("two synth/train/eval runs of the synthetic config: metrics.json (%zu bytes) %s",
                       metrics[0].size(), same ? "bit-identical" : "DIFFERS")};
}

int Main(int argc, char** argv) {
  Setup setup;
  std::vector<int> only;
  CLI::App app{"Acceptance criteria"};
  app.add_option("--only", only, "Run only these criteria")->delimiter(',')->check(CLI::Range(1, 7));
  app.add_option("--work-dir", setup.work_dir, "Scratch directory")->capture_default_str();
  app.add_option("--cli", setup.cli, "Command-line tool")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome(const Setup&)>>> criteria = {
      {"gradient suite", GradientSuite},
      {"closed-form oracle", ClosedForm},
      {"attention invariants", AttentionInvariants},
      {"metric oracles", MetricOracles},
      {"synthetic end-to-end", SyntheticEndToEnd},
      {"mini-NYT smoke", MiniNyt},
      {"determinism", Determinism},
  };
  fs::create_directories(setup.work_dir);
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second(setup);
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    failed += outcome.pass ? 0 : 1;
    std::printf("%s [%d] %s: %s\n", outcome.pass ? "PASS" : "FAIL", id, criteria[i].first,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace mvre

int main(int argc, char** argv) { return mvre::Main(argc, argv); }
