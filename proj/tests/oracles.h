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


#ifndef MVRE_TESTS_ORACLES_H_
#define MVRE_TESTS_ORACLES_H_

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace mvre::oracle {

// Gradient of sum_j gamma_j |v_j - W_j x|^2 + ridge |x|^2, by explicit loops.
inline Eigen::VectorXd IntactGradient(const std::vector<Eigen::MatrixXd>& hats,
                                      const std::vector<Eigen::VectorXd>& views,
                                      const std::vector<double>& gamma, double ridge,
                                      const Eigen::VectorXd& x) {
  Eigen::VectorXd grad = 2.0 * ridge * x;
  for (size_t j = 0; j < hats.size(); ++j) {
    const Eigen::MatrixXd& w = hats[j];
    for (int r = 0; r < w.rows(); ++r) {
      double residual = -views[j](r);
      for (int c = 0; c < w.cols(); ++c) residual += w(r, c) * x(c);
      for (int c = 0; c < w.cols(); ++c) grad(c) += 2.0 * gamma[j] * residual * w(r, c);
    }
  }
  return grad;
}

// Minimizes the same objective by conjugate gradient on the gradient above
// (the objective is quadratic, so the Hessian-vector product is a gradient
// difference).
inline Eigen::VectorXd IterativeIntactMinimizer(const std::vector<Eigen::MatrixXd>& hats,
                                                const std::vector<Eigen::VectorXd>& views,
                                                const std::vector<double>& gamma,
                                                double ridge, int max_iterations = 2000) {
  const int n = static_cast<int>(hats[0].cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd offset = IntactGradient(hats, views, gamma, ridge, zero);
  auto hessian_times = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    return IntactGradient(hats, views, gamma, ridge, p) - offset;
  };
  Eigen::VectorXd r = -IntactGradient(hats, views, gamma, ridge, x);
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iterations && rr > 1e-30; ++it) {
    const Eigen::VectorXd hp = hessian_times(p);
    const double curvature = p.dot(hp);
    if (!(curvature > 0.0)) break;
    const double alpha = rr / curvature;
    x += alpha * p;
    if (it % 50 == 49) {
      // Restart from the true residual to shed accumulated drift.
      r = -IntactGradient(hats, views, gamma, ridge, x);
      p = r;
      rr = r.squaredNorm();
      continue;
    }
    r -= alpha * hp;
    const double next = r.squaredNorm();
    p = r + (next / rr) * p;
    rr = next;
  }
  return x;
}

}  // namespace mvre::oracle

#endif  // MVRE_TESTS_ORACLES_H_
