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

#include "mvre/numerics/grad_check.h"

#include <cmath>

#include "mvre/errors.h"

namespace mvre {

namespace {

double Evaluate(const ScalarFunction& f, uint64_t* signature) {
  Graph graph(/*track_gradients=*/false);
  const double value = f(graph).scalar();
  if (!std::isfinite(value)) throw NumericError("grad_check: non-finite loss");
  *signature = graph.branch_signature();
  return value;
}

}  // namespace

GradCheckReport GradCheck(const ScalarFunction& f, ParameterStore& params,
                          const GradCheckOptions& options) {
  if (!(options.epsilon >= 1e-7 && options.epsilon <= 1e-3)) {
    throw ConfigError("grad_check: epsilon must lie in [1e-7, 1e-3]");
  }
  GradientSet analytic;
  uint64_t base = 0;
  {
    Graph graph;
    Var loss = f(graph);
    if (!std::isfinite(loss.scalar())) {
      throw NumericError("grad_check: non-finite loss");
    }
    graph.Backward(loss);
    analytic = graph.ParameterGradients();
    base = graph.branch_signature();
  }

  GradCheckReport report;
  for (Parameter* p : params.All()) {
    if (!p->name.starts_with(options.prefix)) continue;
    const Matrix* grad = analytic.Find(p);
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      double& x = p->value.data()[i];
      const double saved = x;
      auto at = [&](double offset, bool* same) {
        x = saved + offset;
        uint64_t signature;
        const double value = Evaluate(f, &signature);
        *same = *same && signature == base;
        return value;
      };
      const double a = grad != nullptr ? grad->data()[i] : 0.0;
      auto relative = [&](double n) {
        return std::abs(a - n) / (std::abs(a) + std::abs(n) + 1e-12);
      };
      double numeric = 0.0;
      double h = options.epsilon;
      for (int attempt = 0;; ++attempt) {
        bool same = true;
        if (options.five_point) {
          const double f2p = at(2 * h, &same);
          const double f1p = at(h, &same);
          const double f1m = at(-h, &same);
          const double f2m = at(-2 * h, &same);
          numeric = (f2m - 8 * f1m + 8 * f1p - f2p) / (12 * h);
        } else {
          const double fp = at(h, &same);
          const double fm = at(-h, &same);
          numeric = (fp - fm) / (2 * h);
          if (options.refine_above > 0.0 &&
              std::abs(a) + std::abs(numeric) >= options.floor &&
              relative(numeric) > options.refine_above) {
            const double f2p = at(2 * h, &same);
            const double f2m = at(-2 * h, &same);
            numeric = (f2m - 8 * fm + 8 * fp - f2p) / (12 * h);
            ++report.refined;
          }
        }
        if (same) break;
        if (attempt == options.max_step_reductions) {
          ++report.kinked;
          break;
        }
        if (attempt == 0) ++report.reduced_steps;
        h /= 10.0;
      }
      x = saved;

      ++report.checked;
      if (std::abs(a) + std::abs(numeric) < options.floor) {
        ++report.below_floor;
        continue;
      }
      const double rel = relative(numeric);
      if (rel > report.max_relative_error || report.worst_index < 0) {
        report.max_relative_error = std::max(rel, report.max_relative_error);
        report.worst_parameter = p->name;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace mvre
