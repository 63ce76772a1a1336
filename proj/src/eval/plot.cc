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


#include "mvre/eval/plot.h"

#include <algorithm>
#include <array>
#include <sstream>

#include "mvre/errors.h"

namespace mvre {

namespace {

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<const char*, 8> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string PrCurveSvg(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  if (series.empty()) throw DataError("plot: no curves");
  if (options.width < 200 || options.height < 150 || !(options.max_recall > 0.0)) {
    throw ConfigError("plot: bad canvas or recall range");
  }
  const double left = 60, right = 20, top = 40, bottom = 50;
  const double w = options.width - left - right;
  const double h = options.height - top - bottom;
  auto px = [&](double recall) { return left + w * std::min(recall, options.max_recall) / options.max_recall; };
  auto py = [&](double precision) { return top + h * (1.0 - precision); };

  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << options.width / 2.0 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << Escape(options.title) << "</text>\n";
  for (int i = 0; i <= 5; ++i) {
    const double f = i / 5.0;
    const double x = px(f * options.max_recall), y = py(f);
    out << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + h
        << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + w << "\" y2=\"" << y
        << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << top + h + 16 << "\" text-anchor=\"middle\">"
        << f * options.max_recall << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << f
        << "</text>\n";
  }
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left + w / 2 << "\" y=\"" << options.height - 12
      << "\" text-anchor=\"middle\">Recall</text>\n";
  out << "<text transform=\"translate(16," << top + h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">Precision</text>\n";
  out.precision(3);
  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const PrPoint& p : series[s].curve) {
      if (p.recall > options.max_recall) break;
      out << px(p.recall) << ',' << py(p.precision) << ' ';
    }
    out << "\"/>\n";
    const double ly = top + 14 + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << left + w - 130 << "\" y1=\"" << ly << "\" x2=\"" << left + w - 110
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + w - 104 << "\" y=\"" << ly + 4 << "\">"
        << Escape(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace mvre
