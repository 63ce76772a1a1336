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


#include "mvre/eval/metrics.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mvre/errors.h"

namespace mvre {

std::vector<PrPoint> PrCurve(const std::vector<Prediction>& predictions, const FactSet& gold,
                             size_t top_k) {
  if (predictions.empty()) throw DataError("pr curve: no predictions");
  if (gold.empty()) throw DataError("pr curve: no gold facts");
  std::vector<Prediction> sorted = predictions;
  std::sort(sorted.begin(), sorted.end(), [](const Prediction& a, const Prediction& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pair != b.pair) return a.pair < b.pair;
    return a.relation < b.relation;
  });
  std::set<std::pair<int, int>> seen;
  for (const Prediction& p : sorted) {
    if (p.relation == 0) throw DataError("pr curve: NA prediction");
    if (!seen.emplace(p.pair, p.relation).second) {
      throw DataError("pr curve: duplicate prediction for pair " + std::to_string(p.pair) +
                      ", relation " + std::to_string(p.relation));
    }
  }
  const size_t n = top_k > 0 ? std::min(top_k, sorted.size()) : sorted.size();
  const double total = static_cast<double>(gold.size());
  std::vector<PrPoint> curve;
  curve.reserve(n);
  size_t hits = 0;
  for (size_t k = 0; k < n; ++k) {
    if (gold.count({sorted[k].pair, sorted[k].relation}) > 0) ++hits;
    curve.push_back({static_cast<double>(hits) / total,
                     static_cast<double>(hits) / static_cast<double>(k + 1)});
  }
  return curve;
}

double Auc(const std::vector<PrPoint>& curve) {
  if (curve.empty()) return 0.0;
  double area = 0.0;
  PrPoint last{0.0, curve.front().precision};
  for (const PrPoint& p : curve) {
    area += (p.recall - last.recall) * (p.precision + last.precision) / 2.0;
    last = p;
  }
  return area;
}

double MaxF1(const std::vector<PrPoint>& curve) {
  double best = 0.0;
  for (const PrPoint& p : curve) {
    const double sum = p.precision + p.recall;
    if (sum > 0.0) best = std::max(best, 2.0 * p.precision * p.recall / sum);
  }
  return best;
}

std::vector<Prediction> PredictionsFromScores(const Matrix& scores, int first_pair) {
  std::vector<Prediction> out;
  out.reserve(static_cast<size_t>(scores.cols() * std::max<Eigen::Index>(0, scores.rows() - 1)));
  for (Eigen::Index b = 0; b < scores.cols(); ++b) {
    for (Eigen::Index k = 1; k < scores.rows(); ++k) {
      out.push_back({first_pair + static_cast<int>(b), static_cast<int>(k), scores(k, b)});
    }
  }
  return out;
}

FactSet GoldFacts(const std::vector<EntityPairSample>& samples) {
  FactSet facts;
  for (size_t i = 0; i < samples.size(); ++i) {
    for (int r : samples[i].gold_relations) {
      if (r != 0) facts.emplace(static_cast<int>(i), r);
    }
  }
  return facts;
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

namespace {

std::ifstream OpenCsv(const std::string& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) return in;
  if (line != header) {
    throw DataError(path + ":1: expected header '" + header + "', got '" + line + "'");
  }
  return in;
}

std::vector<std::string> SplitCsv(const std::string& line, size_t fields,
                                  const std::string& where) {
  std::vector<std::string> parts;
  std::stringstream stream(line);
  std::string part;
  while (std::getline(stream, part, ',')) parts.push_back(part);
  if (parts.size() != fields) {
    throw DataError(where + ": expected " + std::to_string(fields) + " fields");
  }
  return parts;
}

template <typename T>
T ParseNumber(const std::string& text, const std::string& where) {
  T value{};
  auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw DataError(where + ": bad number '" + text + "'");
  }
  return value;
}

std::ofstream CreateFile(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

}  // namespace

void SavePredictions(const std::string& path, const std::vector<Prediction>& predictions) {
  std::ofstream out = CreateFile(path);
  out << "pair,relation,score\n";
  for (const Prediction& p : predictions) {
    out << p.pair << ',' << p.relation << ',' << FormatDouble(p.score) << '\n';
  }
}

std::vector<Prediction> LoadPredictions(const std::string& path) {
  std::ifstream in = OpenCsv(path, "pair,relation,score");
  std::vector<Prediction> out;
  std::string line;
  for (int number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(number);
    auto parts = SplitCsv(line, 3, where);
    out.push_back({ParseNumber<int>(parts[0], where), ParseNumber<int>(parts[1], where),
                   ParseNumber<double>(parts[2], where)});
  }
  return out;
}

void SaveFacts(const std::string& path, const FactSet& facts) {
  std::ofstream out = CreateFile(path);
  out << "pair,relation\n";
  for (const auto& [pair, relation] : facts) out << pair << ',' << relation << '\n';
}

FactSet LoadFacts(const std::string& path) {
  std::ifstream in = OpenCsv(path, "pair,relation");
  FactSet out;
  std::string line;
  for (int number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(number);
    auto parts = SplitCsv(line, 2, where);
    out.emplace(ParseNumber<int>(parts[0], where), ParseNumber<int>(parts[1], where));
  }
  return out;
}

void SavePrCurve(const std::string& path, const std::vector<PrPoint>& curve) {
  std::ofstream out = CreateFile(path);
  out << "recall,precision\n";
  for (const PrPoint& p : curve) {
    out << FormatDouble(p.recall) << ',' << FormatDouble(p.precision) << '\n';
  }
}

std::vector<PrPoint> LoadPrCurve(const std::string& path) {
  std::ifstream in = OpenCsv(path, "recall,precision");
  std::vector<PrPoint> out;
  std::string line;
  for (int number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(number);
    auto parts = SplitCsv(line, 2, where);
    out.push_back({ParseNumber<double>(parts[0], where), ParseNumber<double>(parts[1], where)});
  }
  return out;
}

}  // namespace mvre
