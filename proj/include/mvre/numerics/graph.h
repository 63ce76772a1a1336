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

#ifndef MVRE_NUMERICS_GRAPH_H_
#define MVRE_NUMERICS_GRAPH_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvre/numerics/parameters.h"

namespace mvre {

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}

  bool valid() const { return graph_ != nullptr; }
  Graph* graph() const { return graph_; }
  int id() const { return id_; }

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  // Value of a 1x1 node.
  double scalar() const;

 private:
  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Records a dynamic computation for reverse-mode differentiation. Nodes are
// appended in evaluation order, which is also a topological order, so the
// backward sweep simply walks the record in reverse.
//
// A graph is single-threaded. Parameters are read, never written; gradients
// are collected into a GradientSet after Backward().
class Graph {
 public:
  // Receives the gradient flowing into the node (and the node's own value)
  // and pushes it to the inputs.
  using BackwardFn = std::function<void(Graph& graph, const Matrix& grad,
                                        const Matrix& out)>;

  // With track_gradients = false no backward closures are kept (inference).
  explicit Graph(bool track_gradients = true) : track_(track_gradients) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var Constant(Matrix value);
  // Leaf bound to a parameter. Repeated calls return the same node, so a
  // shared parameter accumulates every path into one gradient. The node
  // reads the parameter in place, so it must not change while the graph is
  // in use.
  Var Input(const Parameter& param);

  // Appends an op result. `backward` is only kept (and only converted to a
  // BackwardFn) if some input requires a gradient. Throws NumericError if
  // `value` is not finite.
  template <typename F>
  Var Record(Matrix value, std::initializer_list<Var> inputs, F&& backward) {
    return Finish(std::move(value), NeedsGrad(inputs.begin(), inputs.end()),
                  std::forward<F>(backward));
  }
  template <typename F>
  Var Record(Matrix value, const std::vector<Var>& inputs, F&& backward) {
    return Finish(std::move(value), NeedsGrad(inputs.begin(), inputs.end()),
                  std::forward<F>(backward));
  }

  const Matrix& value(Var v) const {
    const Node& node = nodes_[v.id()];
    return node.param != nullptr ? node.param->value : node.value;
  }
  bool RequiresGrad(Var v) const { return nodes_[v.id()].requires_grad; }
  // Adds `grad` into the node's gradient when it requires one.
  void Accumulate(Var v, const Matrix& grad);
  // Mutable zero-initialized gradient buffer, for scatter-style backward.
  Matrix* GradBuffer(Var v);

  // Seeds d(loss)/d(loss) = 1 for a 1x1 node and runs the reverse sweep.
  void Backward(Var loss);
  // Parameter gradients after Backward().
  GradientSet ParameterGradients() const;

  bool tracking() const { return track_; }

  // Fingerprint of the branches taken by piecewise ops (e.g. which ReLU
  // inputs were positive). Two evaluations with equal signatures lie on the
  // same smooth piece.
  void MixBranches(const Matrix& selector);
  uint64_t branch_signature() const { return branches_; }
  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool has_grad = false;
    bool requires_grad = false;
    BackwardFn backward;
    const Parameter* param = nullptr;
  };

  Var Append(Matrix value, bool requires_grad, BackwardFn backward);
  template <typename It>
  bool NeedsGrad(It begin, It end) const {
    if (!track_) return false;
    for (It it = begin; it != end; ++it) {
      if (RequiresGrad(*it)) return true;
    }
    return false;
  }
  template <typename F>
  Var Finish(Matrix value, bool needs_grad, F&& backward) {
    if (!needs_grad) return Append(std::move(value), false, nullptr);
    return Append(std::move(value), true, BackwardFn(std::forward<F>(backward)));
  }

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  bool track_;
  uint64_t branches_ = 0xcbf29ce484222325ull;
};

inline const Matrix& Var::value() const { return graph_->value(*this); }

}  // namespace mvre

#endif  // MVRE_NUMERICS_GRAPH_H_
