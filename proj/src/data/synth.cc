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

#include "mvre/data/synth.h"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "mvre/errors.h"
#include "mvre/numerics/random.h"

namespace mvre {

using nlohmann::json;

void SynthConfig::Validate() const {
  if (n_samples < 1) throw ConfigError("synth: n_samples must be positive");
  if (n_relations < 2) throw ConfigError("synth: n_relations must be at least 2");
  if (d_x < 1 || d_view < 1) throw ConfigError("synth: dimensions must be positive");
  for (double s : noise) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("synth: noise must be >= 0");
  }
  if (!(inflate_fraction >= 0.0 && inflate_fraction <= 1.0)) {
    throw ConfigError("synth: inflate_fraction must lie in [0, 1]");
  }
  if (!(inflate_factor >= 0.0)) throw ConfigError("synth: inflate_factor must be >= 0");
  if (inflate_view > 2) throw ConfigError("synth: inflate_view must be -1, 0, 1 or 2");
  if (!(center_scale >= 0.0) || !(spread >= 0.0)) {
    throw ConfigError("synth: center_scale and spread must be >= 0");
  }
}

SynthDataset SynthGenerate(const SynthConfig& config) {
  config.Validate();
  SynthDataset data;
  data.config = config;
  Rng structure = Rng::Derive(config.seed, "synth/structure");
  for (auto& map : data.maps) {
    map = structure.GaussianMatrix(config.d_view, config.d_x, 1.0 / std::sqrt(config.d_x));
  }
  data.centers = structure.GaussianMatrix(config.d_x, config.n_relations, config.center_scale);

  Rng rng = Rng::Derive(config.seed, "synth/samples");
  data.samples.reserve(config.n_samples);
  for (int i = 0; i < config.n_samples; ++i) {
    SynthSample s;
    s.label = static_cast<int>(rng.Below(config.n_relations));
    s.latent = data.centers.col(s.label) + rng.GaussianMatrix(config.d_x, 1, config.spread);
    if (rng.Uniform() < config.inflate_fraction) {
      s.inflated_view = config.inflate_view >= 0 ? config.inflate_view
                                                 : static_cast<int>(rng.Below(3));
    }
    for (int j = 0; j < 3; ++j) {
      double sigma = config.noise[j];
      if (j == s.inflated_view) sigma *= config.inflate_factor;
      s.views[j] = data.maps[j] * s.latent;
      if (sigma > 0.0) s.views[j] += rng.GaussianMatrix(config.d_view, 1, sigma);
    }
    data.samples.push_back(std::move(s));
  }
  return data;
}

void SplitSynthetic(const SynthDataset& data, int n_test,
                    std::vector<SynthSample>* train,
                    std::vector<SynthSample>* test) {
  const int n = static_cast<int>(data.samples.size());
  if (n_test < 0 || n_test >= n) throw ConfigError("synth: invalid test size");
  train->assign(data.samples.begin(), data.samples.end() - n_test);
  test->assign(data.samples.end() - n_test, data.samples.end());
}

namespace {

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd FromStd(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void SaveSynthetic(const std::string& path, const std::vector<SynthSample>& samples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  for (const SynthSample& s : samples) {
    json record = {{"label", s.label},
                   {"views", {ToStd(s.views[0]), ToStd(s.views[1]), ToStd(s.views[2])}},
                   {"latent", ToStd(s.latent)},
                   {"inflated", s.inflated_view}};
    out << record.dump(-1, ' ', false, json::error_handler_t::strict) << '\n';
  }
}

std::vector<SynthSample> LoadSynthetic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<SynthSample> samples;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const json r = json::parse(line);
      SynthSample s;
      s.label = r.at("label").get<int>();
      const auto& views = r.at("views");
      if (views.size() != 3) throw DataError("expected three views");
      for (int j = 0; j < 3; ++j) s.views[j] = FromStd(views[j].get<std::vector<double>>());
      if (r.contains("latent")) s.latent = FromStd(r["latent"].get<std::vector<double>>());
      s.inflated_view = r.value("inflated", -1);
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return samples;
}

}  // namespace mvre
