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

#ifndef MVRE_NUMERICS_PARAMETERS_H_
#define MVRE_NUMERICS_PARAMETERS_H_

#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mvre {

using Matrix = Eigen::MatrixXd;

struct Parameter {
  std::string name;
  Matrix value;
};

// Owns every learnable tensor of a model, keyed by name. Addresses are
// stable for the lifetime of the store, so modules keep Parameter pointers.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  // Throws ConfigError if the name is taken.
  Parameter* Add(std::string name, Matrix init);

  Parameter* Find(std::string_view name);
  const Parameter* Find(std::string_view name) const;
  Parameter& Get(std::string_view name);
  const Parameter& Get(std::string_view name) const;

  // Insertion order.
  std::vector<Parameter*> All();
  std::vector<const Parameter*> All() const;

  size_t size() const { return params_.size(); }
  size_t TotalValues() const;

  // Copies values from another store with identical names and shapes.
  void CopyValuesFrom(const ParameterStore& other);

 private:
  std::deque<Parameter> params_;
  std::map<std::string, size_t, std::less<>> index_;
};

// Gradients of a scalar w.r.t. a subset of parameters, in a deterministic
// (parameter insertion) order.
class GradientSet {
 public:
  // Adds into the gradient of `param`, allocating zeros on first use.
  void Accumulate(const Parameter* param, const Matrix& grad);
  const Matrix* Find(const Parameter* param) const;
  const std::vector<std::pair<const Parameter*, Matrix>>& entries() const {
    return entries_;
  }
  double SquaredNorm() const;
  void Scale(double factor);
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<const Parameter*, Matrix>> entries_;
  std::map<const Parameter*, size_t> index_;
};

// Plain stochastic gradient descent: value -= lr * grad. If clip_norm > 0
// the global gradient norm is clipped first. Returns the pre-clip norm.
double SgdStep(ParameterStore& store, const GradientSet& grads, double lr,
               double clip_norm = 0.0);

}  // namespace mvre

#endif  // MVRE_NUMERICS_PARAMETERS_H_
