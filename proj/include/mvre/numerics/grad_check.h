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

#ifndef MVRE_NUMERICS_GRAD_CHECK_H_
#define MVRE_NUMERICS_GRAD_CHECK_H_

#include <functional>
#include <string>

#include "mvre/numerics/graph.h"

namespace mvre {

// Builds a scalar (1x1) loss on the given graph from the parameters.
using ScalarFunction = std::function<Var(Graph&)>;

struct GradCheckOptions {
  // Finite-difference step; must lie in [1e-7, 1e-3].
  double epsilon = 1e-6;
  // Use the fourth-order five-point central stencil instead of the plain
  // two-point one.
  bool five_point = false;
  // Entries with |analytic| + |numeric| below this are not scored: their
  // relative error is dominated by floating-point cancellation.
  double floor = 1e-7;
  // Restrict to parameters whose name starts with this prefix.
  std::string prefix;
  // When a perturbed evaluation takes a different branch of a piecewise op
  // than the unperturbed one, the step is divided by 10 (at most this many
  // times) until all evaluations share a branch signature.
  int max_step_reductions = 3;
  // Two-point estimates whose relative error exceeds this are recomputed
  // with the five-point stencil (reusing the two inner evaluations). Zero
  // disables refinement.
  double refine_above = 0.0;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  Eigen::Index worst_index = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  size_t checked = 0;
  size_t below_floor = 0;
  size_t reduced_steps = 0;  // entries evaluated with a reduced step
  size_t kinked = 0;         // entries that still straddle a kink
  size_t refined = 0;        // entries recomputed with the five-point stencil
};

// Compares reverse-mode gradients of `f` against central differences for
// every entry of every (matching) parameter. The relative error of an entry
// is |a - n| / (|a| + |n| + 1e-12). Throws NumericError on a non-finite loss
// and ConfigError on an epsilon outside [1e-7, 1e-3]. Entries that straddle
// a kink even after the step reductions are counted in `kinked` and scored
// like the others.
GradCheckReport GradCheck(const ScalarFunction& f, ParameterStore& params,
                          const GradCheckOptions& options = {});

}  // namespace mvre

#endif  // MVRE_NUMERICS_GRAD_CHECK_H_
