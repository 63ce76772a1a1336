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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mvre/errors.h"
#include "mvre/numerics/checkpoint.h"
#include "mvre/numerics/grad_check.h"
#include "mvre/numerics/ops.h"
#include "mvre/numerics/random.h"

namespace mvre {
namespace {

Matrix Mat(int rows, int cols, std::initializer_list<double> row_major) {
  Matrix m(rows, cols);
  auto it = row_major.begin();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = *it++;
  return m;
}

// Scalar triple loop, accumulating along k in order.
Matrix LoopMatMul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      double s = 0;
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

// Explicit "same" sliding window.
Matrix LoopConv(const Matrix& x, const Matrix& kernel, int width) {
  const int d_in = x.rows(), len = x.cols(), half = (width - 1) / 2;
  Matrix out = Matrix::Zero(kernel.rows(), len);
  for (int o = 0; o < kernel.rows(); ++o)
    for (int i = 0; i < len; ++i) {
      double s = 0;
      for (int t = 0; t < width; ++t) {
        const int src = i + t - half;
        if (src < 0 || src >= len) continue;
        for (int c = 0; c < d_in; ++c) s += kernel(o, t * d_in + c) * x(c, src);
      }
      out(o, i) = s;
    }
  return out;
}

TEST(MatMulTest, IdentityLeavesInputUnchanged) {
  Graph g;
  Matrix b = Mat(2, 3, {1, 2, 3, 4, 5, 6});
  Var out = MatMul(g.Constant(Matrix::Identity(2, 2)), g.Constant(b));
  EXPECT_EQ(out.value(), b);
}

TEST(MatMulTest, HandArithmetic) {
  Graph g;
  Var out = MatMul(g.Constant(Mat(2, 2, {1, 2, 3, 4})), g.Constant(Mat(2, 1, {1, 1})));
  EXPECT_EQ(out.value(), Mat(2, 1, {3, 7}));
}

TEST(MatMulTest, MatchesTripleLoop) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    Matrix a = rng.GaussianMatrix(3, 4, 1.0), b = rng.GaussianMatrix(4, 2, 1.0);
    Graph g;
    Var out = MatMul(g.Constant(a), g.Constant(b));
    EXPECT_LT((out.value() - LoopMatMul(a, b)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MatMulTest, ShapeMismatchNamesBothShapes) {
  Graph g;
  try {
    MatMul(g.Constant(Matrix::Zero(2, 3)), g.Constant(Matrix::Zero(2, 3)));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("[2x3] vs [2x3]"), std::string::npos);
  }
}

TEST(SoftmaxTest, SymmetricInputIsUniform) {
  Graph g;
  Var p = Softmax(g.Constant(Matrix::Zero(3, 1)));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p.value()(i, 0), 1.0 / 3, 1e-15);
}

TEST(SoftmaxTest, LargeLogitsDoNotOverflow) {
  Graph g;
  Var p = Softmax(g.Constant(Mat(2, 1, {1000, 0})));
  EXPECT_NEAR(p.value()(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(p.value()(1, 0), 0.0, 1e-12);
}

TEST(SoftmaxTest, MatchesDirectExpNormalization) {
  Graph g;
  Var p = Softmax(g.Constant(Mat(3, 1, {1, 2, 3})));
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  EXPECT_NEAR(p.value()(0, 0), std::exp(1.0) / z, 1e-15);
  EXPECT_NEAR(p.value()(1, 0), std::exp(2.0) / z, 1e-15);
  EXPECT_NEAR(p.value()(2, 0), std::exp(3.0) / z, 1e-15);
}

TEST(SoftmaxTest, EmptyInputIsAnError) {
  Graph g;
  EXPECT_THROW(Softmax(g.Constant(Matrix(0, 1))), DimensionError);
}

TEST(SoftmaxTest, MaskedEntriesGetZeroProbability) {
  Graph g;
  const std::vector<char> mask = {1, 0, 1};
  Var p = Softmax(g.Constant(Mat(3, 1, {0, 50, 0})), mask);
  EXPECT_EQ(p.value()(1, 0), 0.0);
  EXPECT_NEAR(p.value()(0, 0), 0.5, 1e-15);
  const std::vector<char> none = {0, 0, 0};
  EXPECT_THROW(Softmax(g.Constant(Matrix::Zero(3, 1)), none), DimensionError);
}

TEST(SoftmaxTest, RandomOutputsAreDistributions) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g;
    const int n = 1 + static_cast<int>(rng.Below(20));
    Var p = Softmax(g.Constant(rng.GaussianMatrix(n, 1, 10.0)));
    EXPECT_NEAR(p.value().sum(), 1.0, 1e-9);
    EXPECT_GE(p.value().minCoeff(), 0.0);
  }
}

TEST(TanhAffineTest, ZeroWeightsGiveZero) {
  Graph g;
  Var y = TanhAffine(g.Constant(Matrix::Zero(3, 2)), g.Constant(Mat(2, 1, {4, 5})),
                     g.Constant(Matrix::Zero(3, 1)));
  EXPECT_EQ(y.value(), Matrix::Zero(3, 1));
}

TEST(TanhAffineTest, IdentityWeights) {
  Graph g;
  Var y = TanhAffine(g.Constant(Matrix::Identity(1, 1)), g.Constant(Mat(1, 1, {0.5})),
                     g.Constant(Matrix::Zero(1, 1)));
  EXPECT_DOUBLE_EQ(y.value()(0, 0), std::tanh(0.5));
}

TEST(TanhAffineTest, MatchesElementwiseOracle) {
  Rng rng(3);
  Matrix w = rng.GaussianMatrix(4, 3, 1.0), x = rng.GaussianMatrix(3, 1, 1.0),
         b = rng.GaussianMatrix(4, 1, 1.0);
  Graph g;
  Var y = TanhAffine(g.Constant(w), g.Constant(x), g.Constant(b));
  for (int i = 0; i < 4; ++i) {
    double s = b(i, 0);
    for (int k = 0; k < 3; ++k) s += w(i, k) * x(k, 0);
    EXPECT_NEAR(y.value()(i, 0), std::tanh(s), 1e-15);
    EXPECT_LT(std::abs(y.value()(i, 0)), 1.0);
  }
}

TEST(LayerNormTest, ConstantVectorMapsToZero) {
  Graph g;
  Var y = LayerNormColumns(g.Constant(Matrix::Constant(5, 1, 3.0)),
                           g.Constant(Matrix::Ones(5, 1)),
                           g.Constant(Matrix::Zero(5, 1)));
  EXPECT_LT(y.value().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LayerNormTest, TwoElementVector) {
  Graph g;
  Var y = LayerNormColumns(g.Constant(Mat(2, 1, {1, -1})), g.Constant(Matrix::Ones(2, 1)),
                           g.Constant(Matrix::Zero(2, 1)));
  EXPECT_NEAR(y.value()(0, 0), 1.0, 1e-5);
  EXPECT_NEAR(y.value()(1, 0), -1.0, 1e-5);
}

TEST(LayerNormTest, MeanAndVarianceMatchBruteForce) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.Below(30));
    Matrix x = rng.GaussianMatrix(d, 1, 4.0);
    x.array() += 2.0;
    Graph g;
    Var y = LayerNormColumns(g.Constant(x), g.Constant(Matrix::Ones(d, 1)),
                             g.Constant(Matrix::Zero(d, 1)));
    double mean = 0, var = 0, in_mean = 0, in_var = 0;
    for (int i = 0; i < d; ++i) in_mean += x(i, 0) / d;
    for (int i = 0; i < d; ++i) in_var += (x(i, 0) - in_mean) * (x(i, 0) - in_mean) / d;
    for (int i = 0; i < d; ++i) mean += y.value()(i, 0) / d;
    for (int i = 0; i < d; ++i) var += (y.value()(i, 0) - mean) * (y.value()(i, 0) - mean) / d;
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(var, in_var / (in_var + 1e-5), 1e-12);
  }
}

TEST(LayerNormTest, SingleFeatureIsAnError) {
  Graph g;
  EXPECT_THROW(LayerNormColumns(g.Constant(Matrix::Ones(1, 3)), g.Constant(Matrix::Ones(1, 1)),
                                g.Constant(Matrix::Zero(1, 1))),
               DimensionError);
}

TEST(Conv1dTest, ZeroKernelsGiveZero) {
  Rng rng(1);
  Graph g;
  Var y = Conv1dSame(g.Constant(rng.GaussianMatrix(4, 6, 1.0)),
                     g.Constant(Matrix::Zero(4, 12)), Var(), 3);
  EXPECT_EQ(y.value(), Matrix::Zero(4, 6));
}

TEST(Conv1dTest, WidthOneIdentityKernelCopiesInput) {
  Rng rng(2);
  Matrix x = rng.GaussianMatrix(4, 6, 1.0);
  Graph g;
  Var y = Conv1dSame(g.Constant(x), g.Constant(Matrix::Identity(4, 4)), Var(), 1);
  EXPECT_EQ(y.value(), x);
}

TEST(Conv1dTest, MatchesSlidingWindowOracle) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    Matrix x = rng.GaussianMatrix(4, 6, 1.0), k = rng.GaussianMatrix(4, 12, 1.0);
    Graph g;
    Var y = Conv1dSame(g.Constant(x), g.Constant(k), Var(), 3);
    EXPECT_EQ(y.cols(), 6);
    EXPECT_LT((y.value() - LoopConv(x, k, 3)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Conv1dTest, SegmentsDoNotLeakAcrossBoundaries) {
  Rng rng(11);
  Matrix x = rng.GaussianMatrix(3, 10, 1.0), k = rng.GaussianMatrix(2, 15, 1.0);
  Graph g;
  Var y = Conv1dSame(g.Constant(x), g.Constant(k), Var(), 5, 5);
  EXPECT_LT((y.value().leftCols(5) - LoopConv(x.leftCols(5), k, 5)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((y.value().rightCols(5) - LoopConv(x.rightCols(5), k, 5)).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_THROW(Conv1dSame(g.Constant(x), g.Constant(k), Var(), 5, 3), DimensionError);
}

TEST(SegmentOps, SoftmaxPerSegmentAndWeightedSum) {
  Graph g;
  Var scores = g.Constant(Mat(1, 5, {0.0, 1.0, 2.0, 5.0, -1.0}));
  const std::vector<int> offsets = {0, 3, 5};
  Var p = SegmentSoftmax(scores, offsets);
  const double z = 1.0 + std::exp(1.0) + std::exp(2.0);
  EXPECT_NEAR(p.value()(0, 0), 1.0 / z, 1e-15);
  EXPECT_NEAR(p.value()(0, 2), std::exp(2.0) / z, 1e-15);
  EXPECT_NEAR(p.value()(0, 3) + p.value()(0, 4), 1.0, 1e-15);
  Var values = g.Constant(Mat(2, 5, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
  Var pooled = SegmentWeightedSum(values, p, offsets);
  ASSERT_EQ(pooled.cols(), 2);
  const Matrix& pv = p.value();
  EXPECT_NEAR(pooled.value()(1, 1), 9 * pv(0, 3) + 10 * pv(0, 4), 1e-14);
  const std::vector<int> empty_segment = {0, 3, 3, 5};
  EXPECT_THROW(SegmentSoftmax(scores, empty_segment), DimensionError);
  const std::vector<char> mask = {1, 1, 1, 0, 0};
  EXPECT_THROW(SegmentSoftmax(scores, offsets, mask), DimensionError);
}

TEST(Conv1dTest, EvenWidthIsAConfigurationError) {
  Graph g;
  EXPECT_THROW(Conv1dSame(g.Constant(Matrix::Zero(2, 4)), g.Constant(Matrix::Zero(2, 8)),
                          Var(), 4),
               ConfigError);
}

TEST(SpdSolveTest, SolvesSystem) {
  Rng rng(5);
  Matrix b = rng.GaussianMatrix(5, 5, 1.0);
  Matrix a = b * b.transpose() + Matrix::Identity(5, 5);
  Matrix rhs = rng.GaussianMatrix(5, 1, 1.0);
  Graph g;
  Var x = SpdSolve(g.Constant(a), g.Constant(rhs));
  EXPECT_LT((a * x.value() - rhs).norm(), 1e-12);
  EXPECT_THROW(SpdSolve(g.Constant(-Matrix::Identity(2, 2)), g.Constant(Matrix::Ones(2, 1))),
               NumericError);
}

TEST(GradCheckTest, Square) {
  ParameterStore store;
  Parameter* w = store.Add("w", Matrix::Constant(1, 1, 3.0));
  auto f = [w](Graph& g) {
    Var v = g.Input(*w);
    return Hadamard(v, v);
  };
  Graph g;
  Var loss = f(g);
  g.Backward(loss);
  EXPECT_DOUBLE_EQ((*g.ParameterGradients().Find(w))(0, 0), 6.0);
  GradCheckReport report = GradCheck(f, store);
  EXPECT_LT(report.max_relative_error, 1e-8);
  EXPECT_EQ(report.checked, 1u);
}

TEST(GradCheckTest, RejectsBadEpsilonAndNonFiniteLoss) {
  ParameterStore store;
  Parameter* w = store.Add("w", Matrix::Constant(1, 1, 1.0));
  auto f = [w](Graph& g) { return g.Input(*w); };
  GradCheckOptions bad;
  bad.epsilon = 1e-2;
  EXPECT_THROW(GradCheck(f, store, bad), ConfigError);
  auto inf = [w](Graph& g) { return Scale(g.Input(*w), 1e308 * 10); };
  EXPECT_THROW(GradCheck(inf, store), NumericError);
}

// Each case maps parameters to an op output; the loss is <output, C> for a
// fixed random C so every output entry is exercised.
struct OpCase {
  std::string name;
  std::vector<std::pair<int, int>> shapes;
  std::function<Var(Graph&, std::vector<Var>&, Rng&)> apply;
};

std::vector<OpCase> OpCases() {
  std::vector<OpCase> cases;
  cases.push_back({"matmul", {{3, 4}, {4, 2}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return MatMul(in[0], in[1]);
                   }});
  cases.push_back({"transpose_add", {{3, 2}, {2, 3}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return Add(Transpose(in[0]), in[1]);
                   }});
  cases.push_back({"sub_add_column", {{3, 4}, {3, 4}, {3, 1}},
                   [](Graph&, std::vector<Var>& in, Rng&) {
                     return AddColumn(Sub(in[0], in[1]), in[2]);
                   }});
  cases.push_back({"scalars", {{2, 3}, {1, 1}, {1, 1}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return MulScalar(AddScalar(in[0], in[1]), in[2]);
                   }});
  cases.push_back({"hadamard_scale", {{3, 3}, {3, 3}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return Scale(Hadamard(in[0], in[1]), 0.7);
                   }});
  cases.push_back({"mul_rows_cols", {{3, 4}, {1, 4}, {3, 1}},
                   [](Graph&, std::vector<Var>& in, Rng&) {
                     return MulColumn(MulRows(in[0], in[1]), in[2]);
                   }});
  cases.push_back({"tanh_affine", {{3, 4}, {4, 2}, {3, 1}},
                   [](Graph&, std::vector<Var>& in, Rng&) {
                     return TanhAffine(in[0], in[1], in[2]);
                   }});
  cases.push_back({"relu", {{4, 3}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return Relu(in[0]);
                   }});
  cases.push_back({"softmax_masked", {{5, 3}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     static const std::vector<char> mask = {1, 1, 0, 1, 1};
                     return SoftmaxColumns(in[0], mask);
                   }});
  cases.push_back({"log_softmax_pick", {{4, 3}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     static const std::vector<int> idx = {0, 3, 1};
                     return PickRows(LogSoftmaxColumns(in[0]), idx);
                   }});
  cases.push_back({"mean_sqnorm", {{3, 4}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return Mean(SquaredNormColumns(in[0]));
                   }});
  cases.push_back({"layer_norm", {{5, 3}, {5, 1}, {5, 1}},
                   [](Graph&, std::vector<Var>& in, Rng&) {
                     return LayerNormColumns(in[0], in[1], in[2]);
                   }});
  cases.push_back({"conv1d", {{3, 5}, {2, 9}, {2, 1}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return Conv1dSame(in[0], in[1], in[2], 3);
                   }});
  cases.push_back({"concat_slice", {{2, 3}, {3, 3}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     Var c = ConcatRows({in[0], in[1]});
                     return ConcatCols({SliceRows(c, 1, 3), SliceRows(SliceCols(c, 2, 1), 0, 3)});
                   }});
  cases.push_back({"gather_repeat_mask", {{3, 5}, {3, 1}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     static const std::vector<int> ids = {4, 0, 4, 2};
                     static const std::vector<char> mask = {1, 0, 1, 1};
                     Var gathered = Add(Gather(in[0], ids), RepeatColumn(in[1], 4));
                     return ConcatCols({MaskColumns(gathered, mask),
                                        MaskedMeanColumns(gathered, mask)});
                   }});
  cases.push_back({"conv1d_segmented", {{3, 8}, {2, 9}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return Conv1dSame(in[0], in[1], Var(), 3, 4);
                   }});
  cases.push_back({"column_dot", {{3, 4}, {3, 4}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     return ColumnDot(in[0], in[1]);
                   }});
  cases.push_back({"segment_pool", {{1, 6}, {3, 6}}, [](Graph&, std::vector<Var>& in, Rng&) {
                     static const std::vector<int> offsets = {0, 1, 4, 6};
                     static const std::vector<char> mask = {1, 1, 0, 1, 1, 1};
                     return SegmentWeightedSum(in[1], SegmentSoftmax(in[0], offsets, mask),
                                               offsets);
                   }});
  cases.push_back({"multi_head_attention", {{4, 6}, {4, 6}, {4, 6}},
                   [](Graph&, std::vector<Var>& in, Rng&) {
                     static const std::vector<char> mask = {1, 1, 0, 1, 0, 1};
                     return MultiHeadAttention(in[0], in[1], in[2], 2, 3, mask);
                   }});
  cases.push_back({"spd_solve", {{4, 4}, {4, 2}}, [](Graph& g, std::vector<Var>& in, Rng&) {
                     Var a = Add(MatMul(in[0], Transpose(in[0])),
                                 g.Constant(Matrix::Identity(4, 4)));
                     return SpdSolve(a, in[1]);
                   }});
  return cases;
}

TEST(GradCheckTest, EveryOpMatchesCentralDifferencesOverSeeds) {
  for (const OpCase& op : OpCases()) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed * 1000 + 17);
      ParameterStore store;
      std::vector<Parameter*> params;
      for (size_t i = 0; i < op.shapes.size(); ++i) {
        params.push_back(store.Add("p" + std::to_string(i),
                                   rng.GaussianMatrix(op.shapes[i].first,
                                                      op.shapes[i].second, 1.0)));
      }
      Matrix weights;
      auto f = [&](Graph& g) {
        std::vector<Var> in;
        for (Parameter* p : params) in.push_back(g.Input(*p));
        Rng unused(0);
        Var out = op.apply(g, in, unused);
        if (weights.size() == 0) {
          Rng wr(seed + 99);
          weights = wr.GaussianMatrix(out.rows(), out.cols(), 1.0);
        }
        return Sum(Hadamard(out, g.Constant(weights)));
      };
      GradCheckReport report = GradCheck(f, store);
      EXPECT_LT(report.max_relative_error, 1e-4)
          << op.name << " seed " << seed << " worst " << report.worst_parameter
          << "[" << report.worst_index << "] analytic " << report.worst_analytic
          << " numeric " << report.worst_numeric;
    }
  }
}

TEST(GraphTest, ForwardIsBitReproducible) {
  auto run = [] {
    Rng rng(42);
    Graph g;
    Var x = g.Constant(rng.GaussianMatrix(6, 5, 1.0));
    Var k = g.Constant(rng.GaussianMatrix(6, 18, 0.3));
    Var y = LayerNormColumns(Relu(Conv1dSame(x, k, Var(), 3)),
                             g.Constant(Matrix::Ones(6, 1)), g.Constant(Matrix::Zero(6, 1)));
    return Matrix(SoftmaxColumns(y).value());
  };
  Matrix a = run(), b = run();
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), a.size() * sizeof(double)));
}

TEST(GraphTest, SharedParameterAccumulatesAllPaths) {
  ParameterStore store;
  Parameter* w = store.Add("w", Matrix::Constant(1, 1, 2.0));
  Graph g;
  Var a = g.Input(*w);
  Var b = g.Input(*w);
  EXPECT_EQ(a.id(), b.id());
  Var loss = Add(Hadamard(a, a), Scale(b, 3.0));  // w^2 + 3w
  g.Backward(loss);
  EXPECT_DOUBLE_EQ((*g.ParameterGradients().Find(w))(0, 0), 7.0);
}

TEST(GraphTest, NonFiniteValuesAreRejected) {
  Graph g;
  EXPECT_THROW(g.Constant(Matrix::Constant(1, 1, std::nan(""))), NumericError);
}

TEST(SgdTest, StepAndClip) {
  ParameterStore store;
  Parameter* w = store.Add("w", Matrix::Constant(2, 1, 1.0));
  GradientSet grads;
  grads.Accumulate(w, Matrix::Constant(2, 1, 3.0));
  grads.Accumulate(w, Matrix::Constant(2, 1, 1.0));
  const double norm = SgdStep(store, grads, 0.1);
  EXPECT_DOUBLE_EQ(norm, std::sqrt(32.0));
  EXPECT_DOUBLE_EQ(w->value(0, 0), 1.0 - 0.4);
  SgdStep(store, grads, 0.1, /*clip_norm=*/1.0);
  EXPECT_NEAR(w->value(0, 0), 0.6 - 0.1 * 4.0 / std::sqrt(32.0), 1e-15);
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "mvre_ckpt_test.bin").string();
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    ParameterStore store;
    store.Add("a.kernel", rng.GaussianMatrix(3, 7, 1e3));
    store.Add("b", rng.GaussianMatrix(1, 1, 1e-300));
    store.Add("c", rng.GaussianMatrix(5, 2, 1.0));
    SaveParameters(store, path);
    ParameterStore loaded;
    loaded.Add("a.kernel", Matrix::Zero(3, 7));
    loaded.Add("b", Matrix::Zero(1, 1));
    loaded.Add("c", Matrix::Zero(5, 2));
    LoadParameters(loaded, path);
    for (const Parameter* p : store.All()) {
      const Matrix& q = loaded.Get(p->name).value;
      EXPECT_EQ(0, std::memcmp(p->value.data(), q.data(), q.size() * sizeof(double)));
    }
    ParameterStore wrong;
    wrong.Add("a.kernel", Matrix::Zero(7, 3));
    EXPECT_THROW(LoadParameters(wrong, path), DimensionError);
  }
  std::filesystem::remove(path);
}

TEST(RngTest, SeededStreamsAreReproducible) {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Next(), b.Next());
  Rng c = Rng::Derive(1, "x"), d = Rng::Derive(1, "x"), e = Rng::Derive(1, "y");
  EXPECT_EQ(c.Next(), d.Next());
  EXPECT_NE(Rng::Derive(1, "x").Next(), e.Next());
  Rng s(3);
  std::vector<int> sample = s.Sample(20, 15);
  EXPECT_EQ(sample.size(), 15u);
  EXPECT_TRUE(std::is_sorted(sample.begin(), sample.end()));
}

}  // namespace
}  // namespace mvre
