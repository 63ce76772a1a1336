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

#include "mvre/numerics/graph.h"

#include <algorithm>

#include "mvre/errors.h"

namespace mvre {

double Var::scalar() const {
  const Matrix& m = value();
  if (m.rows() != 1 || m.cols() != 1) {
    throw DimensionError("scalar() on a " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " node");
  }
  return m(0, 0);
}

Var Graph::Append(Matrix value, bool requires_grad, BackwardFn backward) {
  if (!value.allFinite()) {
    throw NumericError("non-finite value produced at graph node " +
                       std::to_string(nodes_.size()));
  }
  Node& node = nodes_.emplace_back();
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Graph::Constant(Matrix value) {
  return Append(std::move(value), false, nullptr);
}

Var Graph::Input(const Parameter& param) {
  auto it = param_nodes_.find(&param);
  if (it != param_nodes_.end()) return Var(this, it->second);
  if (!param.value.allFinite()) {
    throw NumericError("non-finite value in parameter " + param.name);
  }
  Var v = Append(Matrix(), track_, nullptr);
  nodes_[v.id()].param = &param;
  param_nodes_.emplace(&param, v.id());
  return v;
}

void Graph::Accumulate(Var v, const Matrix& grad) {
  Node& node = nodes_[v.id()];
  if (!node.requires_grad) return;
  if (!node.has_grad) {
    node.grad = grad;
    node.has_grad = true;
  } else {
    node.grad += grad;
  }
}

Matrix* Graph::GradBuffer(Var v) {
  Node& node = nodes_[v.id()];
  if (!node.requires_grad) return nullptr;
  if (!node.has_grad) {
    const Matrix& value = this->value(v);
    node.grad = Matrix::Zero(value.rows(), value.cols());
    node.has_grad = true;
  }
  return &node.grad;
}

void Graph::Backward(Var loss) {
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw DimensionError("Backward() needs a 1x1 loss");
  }
  if (!RequiresGrad(loss)) return;
  Accumulate(loss, Matrix::Ones(1, 1));
  for (int id = loss.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.has_grad || !node.backward) continue;
    node.backward(*this, node.grad, node.param != nullptr ? node.param->value : node.value);
  }
}

void Graph::MixBranches(const Matrix& selector) {
  for (Eigen::Index i = 0; i < selector.size(); ++i) {
    branches_ ^= selector.data()[i] > 0.0 ? 1u : 0u;
    branches_ *= 0x100000001b3ull;
  }
}

GradientSet Graph::ParameterGradients() const {
  // Order by node id, i.e. first use in the forward pass; deterministic.
  std::vector<std::pair<int, const Parameter*>> order;
  order.reserve(param_nodes_.size());
  for (const auto& [param, id] : param_nodes_) order.emplace_back(id, param);
  std::sort(order.begin(), order.end());
  GradientSet grads;
  for (const auto& [id, param] : order) {
    const Node& node = nodes_[id];
    if (node.has_grad) grads.Accumulate(param, node.grad);
  }
  return grads;
}

}  // namespace mvre
