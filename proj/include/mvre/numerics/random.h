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

#ifndef MVRE_NUMERICS_RANDOM_H_
#define MVRE_NUMERICS_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mvre {

// Seeded generator whose draws are identical on every platform. The engine
// is the standard 64-bit Mersenne twister; the distributions are implemented
// here because the std:: ones are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Derives a generator for an independent stream, e.g. (run seed, epoch).
  static Rng Derive(uint64_t seed, uint64_t stream);
  static Rng Derive(uint64_t seed, std::string_view key);

  uint64_t Next() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t Below(uint64_t n);

  // Standard normal (polar method).
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }

  // k distinct indices from [0, n) in increasing order.
  std::vector<int> Sample(int n, int k);

  Eigen::MatrixXd GaussianMatrix(Eigen::Index rows, Eigen::Index cols,
                                 double stddev);
  Eigen::MatrixXd UniformMatrix(Eigen::Index rows, Eigen::Index cols,
                                double lo, double hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// 64-bit FNV-1a.
uint64_t Fnv1a(std::string_view data);

}  // namespace mvre

#endif  // MVRE_NUMERICS_RANDOM_H_
