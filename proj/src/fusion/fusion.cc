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

#include "mvre/fusion/fusion.h"

#include <cmath>
#include <vector>

#include "mvre/errors.h"
#include "mvre/numerics/init.h"
#include "mvre/numerics/ops.h"
#include "mvre/numerics/random.h"

namespace mvre {

FusionStrategy ParseFusionStrategy(const std::string& name) {
  if (name == "insrl") return FusionStrategy::kInsrl;
  if (name == "insrl-avg") return FusionStrategy::kInsrlAvg;
  if (name == "mv-avg") return FusionStrategy::kMvAvg;
  if (name == "mv-att") return FusionStrategy::kMvAtt;
  throw ConfigError("unknown fusion strategy '" + name +
                    "' (expected insrl, insrl-avg, mv-avg or mv-att)");
}

std::string FusionStrategyName(FusionStrategy strategy) {
  switch (strategy) {
    case FusionStrategy::kInsrl: return "insrl";
    case FusionStrategy::kInsrlAvg: return "insrl-avg";
    case FusionStrategy::kMvAvg: return "mv-avg";
    case FusionStrategy::kMvAtt: return "mv-att";
  }
  return "?";
}

FusionForm ParseFusionForm(const std::string& name) {
  if (name == "learnable") return FusionForm::kLearnable;
  if (name == "closed") return FusionForm::kClosed;
  throw ConfigError("unknown fusion form '" + name + "' (expected learnable or closed)");
}

std::string FusionFormName(FusionForm form) {
  return form == FusionForm::kLearnable ? "learnable" : "closed";
}

int FusionConfig::PresentCount() const {
  return static_cast<int>(present[0]) + present[1] + present[2];
}

void FusionConfig::Validate() const {
  if (d_model < 1 || d_x < 1) throw ConfigError("fusion: dimensions must be positive");
  if (d_x <= d_model) {
    throw ConfigError("fusion: d_x (" + std::to_string(d_x) + ") must exceed d_model (" +
                      std::to_string(d_model) + ")");
  }
  if (PresentCount() == 0) throw ConfigError("fusion: at least one view must be present");
  if (form == FusionForm::kClosed && !(ridge > 0.0)) {
    throw ConfigError("fusion: the closed form needs a positive ridge");
  }
}

namespace {

std::string HatName(int j) { return "fusion/W_hat" + std::to_string(j + 1); }

// Row j of a 3 x B weight matrix.
Var Weight(Var gamma, int j) { return SliceRows(gamma, j, 1); }

}  // namespace

void RegisterFusion(ParameterStore& store, const FusionConfig& config, Rng& rng) {
  config.Validate();
  const int d = config.d_model;
  if (config.UsesIntactSpace()) {
    for (int j = 0; j < 3; ++j) {
      store.Add(HatName(j), rng.GaussianMatrix(d, config.d_x, 1.0 / std::sqrt(d)));
    }
    Matrix w = Matrix::Identity(config.d_x, config.d_x) +
               rng.GaussianMatrix(config.d_x, config.d_x, 0.01);
    store.Add("fusion/W", std::move(w));
  } else {
    store.Add("fusion/W6", XavierUniform(rng, config.d_x, d));
    store.Add("fusion/b6", Matrix::Zero(config.d_x, 1));
  }
  if (config.UsesAttention()) {
    store.Add("fusion/W4", XavierUniform(rng, d, d));
    store.Add("fusion/w4", XavierUniform(rng, d, 1));
    store.Add("fusion/b4", Matrix::Zero(1, 1));
  }
}

Var ViewAttention(Graph& g, const ParameterStore& store, const ViewVars& views,
                  const std::array<bool, 3>& present, Var r_hat) {
  Var w4 = g.Input(store.Get("fusion/W4"));
  Var w4t = Transpose(g.Input(store.Get("fusion/w4")));
  Var b4 = g.Input(store.Get("fusion/b4"));
  Eigen::Index batch = -1;
  for (int j = 0; j < 3; ++j) {
    if (present[j]) batch = views[j].cols();
  }
  std::vector<Var> rows;
  for (int j = 0; j < 3; ++j) {
    if (present[j]) {
      rows.push_back(AddScalar(MatMul(w4t, Tanh(AddColumn(MatMul(w4, views[j]), r_hat))), b4));
    } else {
      rows.push_back(g.Constant(Matrix::Zero(1, batch)));
    }
  }
  const std::vector<char> mask = {present[0], present[1], present[2]};
  return SoftmaxColumns(ConcatRows(rows), mask);
}

Var UniformViewWeights(Graph& g, const std::array<bool, 3>& present, Eigen::Index batch) {
  const int k = static_cast<int>(present[0]) + present[1] + present[2];
  Matrix w = Matrix::Zero(3, batch);
  for (int j = 0; j < 3; ++j) {
    if (present[j]) w.row(j).setConstant(1.0 / k);
  }
  return g.Constant(std::move(w));
}

Var IntactLearnable(Graph& g, const ParameterStore& store, const ViewVars& views, Var gamma,
                    const std::array<bool, 3>& present) {
  Var total;
  for (int j = 0; j < 3; ++j) {
    if (!present[j]) continue;
    Var term = MulRows(MatMul(Transpose(g.Input(store.Get(HatName(j)))), views[j]),
                       Weight(gamma, j));
    total = total.valid() ? Add(total, term) : term;
  }
  return MatMul(g.Input(store.Get("fusion/W")), total);
}

Var IntactClosedForm(Graph& g, const ParameterStore& store, const ViewVars& views, Var gamma,
                     const std::array<bool, 3>& present, double ridge) {
  if (!(ridge > 0.0)) throw ConfigError("closed form: ridge must be positive");
  std::array<Var, 3> hat_t;
  std::array<Var, 3> gram;
  Eigen::Index d_x = 0, batch = 0;
  for (int j = 0; j < 3; ++j) {
    if (!present[j]) continue;
    Var hat = g.Input(store.Get(HatName(j)));
    hat_t[j] = Transpose(hat);
    gram[j] = MatMul(hat_t[j], hat);
    d_x = hat.cols();
    batch = views[j].cols();
  }
  Var ridge_term = g.Constant(ridge * Matrix::Identity(d_x, d_x));
  std::vector<Var> columns;
  columns.reserve(batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    Var a = ridge_term;
    Var rhs;
    for (int j = 0; j < 3; ++j) {
      if (!present[j]) continue;
      Var w = SliceCols(Weight(gamma, j), b, 1);
      a = Add(a, MulScalar(gram[j], w));
      Var term = MulScalar(MatMul(hat_t[j], SliceCols(views[j], b, 1)), w);
      rhs = rhs.valid() ? Add(rhs, term) : term;
    }
    columns.push_back(SpdSolve(a, rhs));
  }
  return ConcatCols(columns);
}

Var ReconstructionLoss(Graph& g, const ParameterStore& store, const ViewVars& views, Var x,
                       Var gamma, const std::array<bool, 3>& present) {
  Var total;
  for (int j = 0; j < 3; ++j) {
    if (!present[j]) continue;
    Var residual = Sub(views[j], MatMul(g.Input(store.Get(HatName(j))), x));
    Var term = Hadamard(SquaredNormColumns(residual), Weight(gamma, j));
    total = total.valid() ? Add(total, term) : term;
  }
  return Mean(total);
}

FusionOutput Fuse(Graph& g, const ParameterStore& store, const FusionConfig& config,
                  const ViewVars& views, Var r_hat) {
  Eigen::Index batch = 0;
  for (int j = 0; j < 3; ++j) {
    if (!config.present[j]) continue;
    if (!views[j].valid()) throw DimensionError("fusion: view " + std::to_string(j + 1) +
                                                " is marked present but missing");
    if (batch != 0 && views[j].cols() != batch) {
      throw DimensionError("fusion: views disagree on the batch size");
    }
    batch = views[j].cols();
  }
  FusionOutput out;
  switch (config.strategy) {
    case FusionStrategy::kInsrl:
    case FusionStrategy::kInsrlAvg: {
      out.gamma = config.strategy == FusionStrategy::kInsrl
                      ? ViewAttention(g, store, views, config.present, r_hat)
                      : UniformViewWeights(g, config.present, batch);
      out.x = config.form == FusionForm::kLearnable
                  ? IntactLearnable(g, store, views, out.gamma, config.present)
                  : IntactClosedForm(g, store, views, out.gamma, config.present, config.ridge);
      break;
    }
    case FusionStrategy::kMvAvg:
    case FusionStrategy::kMvAtt: {
      if (config.strategy == FusionStrategy::kMvAtt) {
        out.gamma = ViewAttention(g, store, views, config.present, r_hat);
      }
      Var weights = out.gamma.valid() ? out.gamma : UniformViewWeights(g, config.present, batch);
      Var mixed;
      for (int j = 0; j < 3; ++j) {
        if (!config.present[j]) continue;
        Var term = MulRows(views[j], SliceRows(weights, j, 1));
        mixed = mixed.valid() ? Add(mixed, term) : term;
      }
      out.x = TanhAffine(g.Input(store.Get("fusion/W6")), mixed,
                         g.Input(store.Get("fusion/b6")));
      break;
    }
  }
  return out;
}

}  // namespace mvre
