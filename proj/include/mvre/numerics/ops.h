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

#ifndef MVRE_NUMERICS_OPS_H_
#define MVRE_NUMERICS_OPS_H_

#include <span>
#include <vector>

#include "mvre/numerics/graph.h"

namespace mvre {

// Differentiable operations over Graph nodes. Every op checks shapes and
// throws DimensionError naming both operands on mismatch. Matrices are
// column-major; sequences are laid out as d x l with one column per token.

Var MatMul(Var a, Var b);
Var Transpose(Var a);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
// a + col * 1^T: adds a d x 1 column to every column of a.
Var AddColumn(Var a, Var col);
// a + s for a 1x1 node s.
Var AddScalar(Var a, Var s);
Var Scale(Var a, double factor);
// s * a for a 1x1 node s.
Var MulScalar(Var a, Var s);
Var Hadamard(Var a, Var b);
// Scales column j of a by row(0, j); row is 1 x cols(a).
Var MulRows(Var a, Var row);
// Scales row i of a by col(i, 0); col is rows(a) x 1.
Var MulColumn(Var a, Var col);

Var Tanh(Var a);
Var Relu(Var a);

// tanh(W x + b) with b a column broadcast over the columns of x.
Var TanhAffine(Var w, Var x, Var b);

// Column-wise softmax, max-subtracted. Rows whose mask entry is 0 get
// probability 0 and take no part in the normalization. An empty mask means
// every row is active. Throws if a column has no active row.
Var SoftmaxColumns(Var a, std::span<const char> row_mask = {});
Var Softmax(Var z, std::span<const char> mask = {});
Var LogSoftmaxColumns(Var a);
// out(0, j) = a(index[j], j).
Var PickRows(Var a, std::span<const int> index);

Var Sum(Var a);
Var Mean(Var a);
// Per-column sum of squares, 1 x cols.
Var SquaredNormColumns(Var a);

// Normalizes each column to zero mean / unit variance, then applies a
// per-row gain and bias (both rows x 1). Requires rows >= 2.
Var LayerNormColumns(Var x, Var gain, Var bias, double epsilon = 1e-5);

// "Same"-padded 1-D convolution along columns. x: d_in x l, kernel:
// d_out x (width * d_in) with block t holding the taps for offset
// t - (width-1)/2, bias: d_out x 1 (optional). width must be odd.
// With segment > 0 the columns form consecutive sequences of that length
// and the convolution does not cross their boundaries.
Var Conv1dSame(Var x, Var kernel, Var bias, int width, Eigen::Index segment = 0);

Var ConcatRows(const std::vector<Var>& parts);
Var ConcatCols(const std::vector<Var>& parts);
Var SliceRows(Var a, Eigen::Index start, Eigen::Index count);
Var SliceCols(Var a, Eigen::Index start, Eigen::Index count);
// out(:, k) = table(:, ids[k]). Throws DimensionError on an out-of-range id.
Var Gather(Var table, std::span<const int> ids);
// Repeats a d x 1 column n times.
Var RepeatColumn(Var col, Eigen::Index n);
// Zeroes columns whose mask entry is 0.
Var MaskColumns(Var a, std::span<const char> col_mask);
// Mean over the columns whose mask entry is nonzero.
Var MaskedMeanColumns(Var a, std::span<const char> col_mask);

// Per-column dot products of equally shaped a and b, 1 x cols.
Var ColumnDot(Var a, Var b);

// Softmax of a 1 x N row within each segment [offsets[b], offsets[b+1]).
// Inactive entries (mask 0) get weight 0. Throws if a segment is empty or
// has no active entry.
Var SegmentSoftmax(Var scores, std::span<const int> offsets,
                   std::span<const char> mask = {});
// out(:, b) = sum over segment b of weights(0, i) * values(:, i).
Var SegmentWeightedSum(Var values, Var weights, std::span<const int> offsets);

// Multi-head scaled dot-product attention inside consecutive segments of
// `segment` columns. q, k, v are d x N with d divisible by heads; keys whose
// mask entry is 0 are excluded. Returns the d x N concatenated head outputs.
Var MultiHeadAttention(Var q, Var k, Var v, int heads, Eigen::Index segment,
                       std::span<const char> key_mask = {});

// Solves A x = b for symmetric positive-definite A via Cholesky. Throws
// NumericError if the factorization fails or the result is not finite.
Var SpdSolve(Var a, Var b);

}  // namespace mvre

#endif  // MVRE_NUMERICS_OPS_H_
