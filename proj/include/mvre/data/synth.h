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

#ifndef MVRE_DATA_SYNTH_H_
#define MVRE_DATA_SYNTH_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mvre {

struct SynthConfig {
  int n_samples = 2500;
  int n_relations = 5;
  int d_x = 24;     // latent dimension
  int d_view = 16;  // dimension of every emitted view
  std::array<double, 3> noise = {0.3, 0.3, 0.3};  // per-view noise stddev
  // Heterogeneity: a fraction of samples get the noise of one view
  // multiplied by inflate_factor. inflate_view < 0 picks the view uniformly.
  double inflate_fraction = 0.5;
  double inflate_factor = 20.0;
  int inflate_view = -1;
  double center_scale = 1.0;  // stddev of the class means
  double spread = 0.6;        // within-class stddev of the latent
  uint64_t seed = 1;

  void Validate() const;
};

struct SynthSample {
  int label = 0;
  std::array<Eigen::VectorXd, 3> views;
  Eigen::VectorXd latent;
  int inflated_view = -1;  // -1 when no view was inflated
};

struct SynthDataset {
  SynthConfig config;
  std::array<Eigen::MatrixXd, 3> maps;  // d_view x d_x generation maps
  Eigen::MatrixXd centers;              // d_x x n_relations
  std::vector<SynthSample> samples;
};

// Latents come from a relation-conditioned Gaussian mixture; view j is
// maps[j] * latent + noise.
SynthDataset SynthGenerate(const SynthConfig& config);

// Splits off the last n_test samples.
void SplitSynthetic(const SynthDataset& data, int n_test,
                    std::vector<SynthSample>* train,
                    std::vector<SynthSample>* test);

void SaveSynthetic(const std::string& path, const std::vector<SynthSample>& samples);
std::vector<SynthSample> LoadSynthetic(const std::string& path);

}  // namespace mvre

#endif  // MVRE_DATA_SYNTH_H_
