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


#ifndef MVRE_EVAL_PLOT_H_
#define MVRE_EVAL_PLOT_H_

#include <string>
#include <vector>

#include "mvre/eval/metrics.h"

namespace mvre {

struct PlotSeries {
  std::string label;
  std::vector<PrPoint> curve;
};

struct PlotOptions {
  int width = 640;
  int height = 480;
  std::string title = "Precision-recall";
  double max_recall = 1.0;  // right end of the x axis
};

// Standalone SVG document with one polyline per series and a legend.
std::string PrCurveSvg(const std::vector<PlotSeries>& series, const PlotOptions& options = {});

}  // namespace mvre

#endif  // MVRE_EVAL_PLOT_H_
