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


#ifndef MVRE_EVAL_METRICS_H_
#define MVRE_EVAL_METRICS_H_

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mvre/data/encode.h"
#include "mvre/numerics/parameters.h"

namespace mvre {

struct Prediction {
  int pair = 0;
  int relation = 0;  // never NA
  double score = 0.0;
};

// Gold (pair, relation) facts, NA excluded.
using FactSet = std::set<std::pair<int, int>>;

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

// Sorts by descending score, ties by pair then relation, and emits one point
// per prefix (the first top_k prefixes when top_k > 0). Throws DataError on
// empty predictions, an empty gold set, an NA prediction or a duplicate
// (pair, relation).
std::vector<PrPoint> PrCurve(const std::vector<Prediction>& predictions, const FactSet& gold,
                             size_t top_k = 0);
// Trapezoidal area over recall with (0, p_1) prepended.
double Auc(const std::vector<PrPoint>& curve);
// Max of 2pr / (p + r) over the points, 0 where p + r = 0.
double MaxF1(const std::vector<PrPoint>& curve);

// Rows 1..n-1 of an n x B score matrix become predictions for pairs
// first_pair .. first_pair + B - 1; row 0 (NA) is skipped.
std::vector<Prediction> PredictionsFromScores(const Matrix& scores, int first_pair = 0);
// Facts of evaluation samples, pair id = sample index.
FactSet GoldFacts(const std::vector<EntityPairSample>& samples);

// "pair,relation,score" with a header line.
void SavePredictions(const std::string& path, const std::vector<Prediction>& predictions);
std::vector<Prediction> LoadPredictions(const std::string& path);
// "pair,relation" with a header line.
void SaveFacts(const std::string& path, const FactSet& facts);
FactSet LoadFacts(const std::string& path);
// "recall,precision" with a header line.
void SavePrCurve(const std::string& path, const std::vector<PrPoint>& curve);
std::vector<PrPoint> LoadPrCurve(const std::string& path);

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double value);

}  // namespace mvre

#endif  // MVRE_EVAL_METRICS_H_
