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

#ifndef MVRE_NUMERICS_INIT_H_
#define MVRE_NUMERICS_INIT_H_

#include <cmath>

#include "mvre/numerics/parameters.h"
#include "mvre/numerics/random.h"

namespace mvre {

// Glorot uniform. fan_in / fan_out default to the matrix shape.
inline Matrix XavierUniform(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                            double fan_in = 0.0, double fan_out = 0.0) {
  if (fan_in <= 0.0) fan_in = static_cast<double>(cols);
  if (fan_out <= 0.0) fan_out = static_cast<double>(rows);
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  return rng.UniformMatrix(rows, cols, -limit, limit);
}

}  // namespace mvre

#endif  // MVRE_NUMERICS_INIT_H_
