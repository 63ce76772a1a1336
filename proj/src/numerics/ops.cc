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

#include "mvre/numerics/ops.h"

#include <cmath>
#include <limits>
#include <string>

#include "mvre/errors.h"

namespace mvre {

namespace {

std::string ShapeOf(const Matrix& m) {
  return "[" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + "]";
}

[[noreturn]] void Mismatch(const char* op, const Matrix& a, const Matrix& b) {
  throw DimensionError(std::string(op) + ": shape mismatch " + ShapeOf(a) +
                       " vs " + ShapeOf(b));
}

void RequireSameShape(const char* op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) Mismatch(op, a, b);
}

void RequireScalar(const char* op, const Matrix& s) {
  if (s.rows() != 1 || s.cols() != 1) {
    throw DimensionError(std::string(op) + ": expected 1x1, got " + ShapeOf(s));
  }
}

bool Active(std::span<const char> mask, Eigen::Index i) {
  return mask.empty() || mask[static_cast<size_t>(i)] != 0;
}

}  // namespace

Var MatMul(Var a, Var b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows()) Mismatch("matmul", av, bv);
  Matrix out(av.rows(), bv.cols());
  out.noalias() = av * bv;
  return a.graph()->Record(
      std::move(out), {a, b}, [a, b](Graph& g, const Matrix& grad, const Matrix&) {
        if (g.RequiresGrad(a)) {
          Matrix ga(a.rows(), a.cols());
          ga.noalias() = grad * g.value(b).transpose();
          g.Accumulate(a, ga);
        }
        if (g.RequiresGrad(b)) {
          Matrix gb(b.rows(), b.cols());
          gb.noalias() = g.value(a).transpose() * grad;
          g.Accumulate(b, gb);
        }
      });
}

Var Transpose(Var a) {
  return a.graph()->Record(
      a.value().transpose(), {a},
      [a](Graph& g, const Matrix& grad, const Matrix&) {
        g.Accumulate(a, grad.transpose());
      });
}

Var Add(Var a, Var b) {
  RequireSameShape("add", a.value(), b.value());
  return a.graph()->Record(a.value() + b.value(), {a, b},
                           [a, b](Graph& g, const Matrix& grad, const Matrix&) {
                             g.Accumulate(a, grad);
                             g.Accumulate(b, grad);
                           });
}

Var Sub(Var a, Var b) {
  RequireSameShape("sub", a.value(), b.value());
  return a.graph()->Record(a.value() - b.value(), {a, b},
                           [a, b](Graph& g, const Matrix& grad, const Matrix&) {
                             g.Accumulate(a, grad);
                             g.Accumulate(b, -grad);
                           });
}

Var AddColumn(Var a, Var col) {
  const Matrix& av = a.value();
  const Matrix& cv = col.value();
  if (cv.cols() != 1 || cv.rows() != av.rows()) Mismatch("add_column", av, cv);
  Matrix out = av.colwise() + cv.col(0);
  return a.graph()->Record(
      std::move(out), {a, col},
      [a, col](Graph& g, const Matrix& grad, const Matrix&) {
        g.Accumulate(a, grad);
        if (g.RequiresGrad(col)) g.Accumulate(col, grad.rowwise().sum());
      });
}

Var AddScalar(Var a, Var s) {
  RequireScalar("add_scalar", s.value());
  Matrix out = a.value().array() + s.value()(0, 0);
  return a.graph()->Record(
      std::move(out), {a, s}, [a, s](Graph& g, const Matrix& grad, const Matrix&) {
        g.Accumulate(a, grad);
        if (g.RequiresGrad(s)) g.Accumulate(s, Matrix::Constant(1, 1, grad.sum()));
      });
}

Var Scale(Var a, double factor) {
  return a.graph()->Record(
      a.value() * factor, {a},
      [a, factor](Graph& g, const Matrix& grad, const Matrix&) {
        g.Accumulate(a, grad * factor);
      });
}

Var MulScalar(Var a, Var s) {
  RequireScalar("mul_scalar", s.value());
  Matrix out = a.value() * s.value()(0, 0);
  return a.graph()->Record(
      std::move(out), {a, s}, [a, s](Graph& g, const Matrix& grad, const Matrix&) {
        if (g.RequiresGrad(a)) g.Accumulate(a, grad * g.value(s)(0, 0));
        if (g.RequiresGrad(s)) {
          g.Accumulate(s, Matrix::Constant(1, 1, grad.cwiseProduct(g.value(a)).sum()));
        }
      });
}

Var Hadamard(Var a, Var b) {
  RequireSameShape("hadamard", a.value(), b.value());
  return a.graph()->Record(
      a.value().cwiseProduct(b.value()), {a, b},
      [a, b](Graph& g, const Matrix& grad, const Matrix&) {
        if (g.RequiresGrad(a)) g.Accumulate(a, grad.cwiseProduct(g.value(b)));
        if (g.RequiresGrad(b)) g.Accumulate(b, grad.cwiseProduct(g.value(a)));
      });
}

Var MulRows(Var a, Var row) {
  const Matrix& av = a.value();
  const Matrix& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != av.cols()) Mismatch("mul_rows", av, rv);
  Matrix out = av * rv.row(0).asDiagonal();
  return a.graph()->Record(
      std::move(out), {a, row},
      [a, row](Graph& g, const Matrix& grad, const Matrix&) {
        if (g.RequiresGrad(a)) {
          g.Accumulate(a, grad * g.value(row).row(0).asDiagonal());
        }
        if (g.RequiresGrad(row)) {
          g.Accumulate(row, grad.cwiseProduct(g.value(a)).colwise().sum());
        }
      });
}

Var MulColumn(Var a, Var col) {
  const Matrix& av = a.value();
  const Matrix& cv = col.value();
  if (cv.cols() != 1 || cv.rows() != av.rows()) Mismatch("mul_column", av, cv);
  Matrix out = cv.col(0).asDiagonal() * av;
  return a.graph()->Record(
      std::move(out), {a, col},
      [a, col](Graph& g, const Matrix& grad, const Matrix&) {
        if (g.RequiresGrad(a)) {
          g.Accumulate(a, g.value(col).col(0).asDiagonal() * grad);
        }
        if (g.RequiresGrad(col)) {
          g.Accumulate(col, grad.cwiseProduct(g.value(a)).rowwise().sum());
        }
      });
}

Var Tanh(Var a) {
  Matrix out = a.value().array().tanh();
  return a.graph()->Record(
      std::move(out), {a}, [a](Graph& g, const Matrix& grad, const Matrix& out) {
        g.Accumulate(a, (grad.array() * (1.0 - out.array().square())).matrix());
      });
}

Var Relu(Var a) {
  Matrix out = a.value().cwiseMax(0.0);
  a.graph()->MixBranches(a.value());
  return a.graph()->Record(
      std::move(out), {a}, [a](Graph& g, const Matrix& grad, const Matrix&) {
        const Matrix& in = g.value(a);
        g.Accumulate(a, (in.array() > 0.0).select(grad, 0.0).matrix());
      });
}

Var TanhAffine(Var w, Var x, Var b) { return Tanh(AddColumn(MatMul(w, x), b)); }

Var SoftmaxColumns(Var a, std::span<const char> row_mask) {
  const Matrix& av = a.value();
  if (av.rows() == 0 || av.cols() == 0) {
    throw DimensionError("softmax: empty input");
  }
  if (!row_mask.empty() && static_cast<Eigen::Index>(row_mask.size()) != av.rows()) {
    throw DimensionError("softmax: mask length " + std::to_string(row_mask.size()) +
                         " vs " + ShapeOf(av));
  }
  Matrix out = Matrix::Zero(av.rows(), av.cols());
  for (Eigen::Index c = 0; c < av.cols(); ++c) {
    double max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < av.rows(); ++r) {
      if (Active(row_mask, r)) max = std::max(max, av(r, c));
    }
    if (max == -std::numeric_limits<double>::infinity()) {
      throw DimensionError("softmax: every entry is masked");
    }
    double total = 0.0;
    for (Eigen::Index r = 0; r < av.rows(); ++r) {
      if (!Active(row_mask, r)) continue;
      out(r, c) = std::exp(av(r, c) - max);
      total += out(r, c);
    }
    out.col(c) /= total;
  }
  return a.graph()->Record(
      std::move(out), {a}, [a](Graph& g, const Matrix& grad, const Matrix& y) {
        // dz = y * (dy - <y, dy>) per column; masked entries have y = 0.
        Matrix dz = y.cwiseProduct(grad);
        const Eigen::RowVectorXd dots = dz.colwise().sum();
        dz -= y * dots.asDiagonal();
        g.Accumulate(a, dz);
      });
}

Var Softmax(Var z, std::span<const char> mask) {
  if (z.cols() != 1) {
    throw DimensionError("softmax: expected a column vector, got " +
                         ShapeOf(z.value()));
  }
  return SoftmaxColumns(z, mask);
}

Var LogSoftmaxColumns(Var a) {
  const Matrix& av = a.value();
  if (av.rows() == 0 || av.cols() == 0) {
    throw DimensionError("log_softmax: empty input");
  }
  Matrix out(av.rows(), av.cols());
  for (Eigen::Index c = 0; c < av.cols(); ++c) {
    const double max = av.col(c).maxCoeff();
    const double lse = max + std::log((av.col(c).array() - max).exp().sum());
    out.col(c) = av.col(c).array() - lse;
  }
  return a.graph()->Record(
      std::move(out), {a}, [a](Graph& g, const Matrix& grad, const Matrix& y) {
        const Matrix p = y.array().exp();
        Matrix dz = grad - p * grad.colwise().sum().asDiagonal();
        g.Accumulate(a, dz);
      });
}

Var PickRows(Var a, std::span<const int> index) {
  const Matrix& av = a.value();
  if (static_cast<Eigen::Index>(index.size()) != av.cols()) {
    throw DimensionError("pick_rows: " + std::to_string(index.size()) +
                         " indices for " + ShapeOf(av));
  }
  Matrix out(1, av.cols());
  for (Eigen::Index c = 0; c < av.cols(); ++c) {
    const int r = index[c];
    if (r < 0 || r >= av.rows()) {
      throw DimensionError("pick_rows: index " + std::to_string(r) +
                           " out of range for " + ShapeOf(av));
    }
    out(0, c) = av(r, c);
  }
  std::vector<int> idx(index.begin(), index.end());
  return a.graph()->Record(
      std::move(out), {a},
      [a, idx = std::move(idx)](Graph& g, const Matrix& grad, const Matrix&) {
        Matrix* ga = g.GradBuffer(a);
        if (ga == nullptr) return;
        for (size_t c = 0; c < idx.size(); ++c) (*ga)(idx[c], c) += grad(0, c);
      });
}

Var Sum(Var a) {
  return a.graph()->Record(
      Matrix::Constant(1, 1, a.value().sum()), {a},
      [a](Graph& g, const Matrix& grad, const Matrix&) {
        g.Accumulate(a, Matrix::Constant(a.rows(), a.cols(), grad(0, 0)));
      });
}

Var Mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0) throw DimensionError("mean: empty input");
  return Scale(Sum(a), 1.0 / n);
}

Var SquaredNormColumns(Var a) {
  return a.graph()->Record(
      a.value().colwise().squaredNorm(), {a},
      [a](Graph& g, const Matrix& grad, const Matrix&) {
        g.Accumulate(a, 2.0 * g.value(a) * grad.row(0).asDiagonal());
      });
}

Var LayerNormColumns(Var x, Var gain, Var bias, double epsilon) {
  const Matrix& xv = x.value();
  const Eigen::Index d = xv.rows();
  if (d < 2) {
    throw DimensionError("layer_norm: need at least 2 features, got " +
                         ShapeOf(xv));
  }
  if (gain.rows() != d || gain.cols() != 1) Mismatch("layer_norm", xv, gain.value());
  if (bias.rows() != d || bias.cols() != 1) Mismatch("layer_norm", xv, bias.value());
  const Eigen::RowVectorXd mean = xv.colwise().mean();
  Matrix centered = xv.rowwise() - mean;
  const Eigen::RowVectorXd inv_std =
      ((centered.colwise().squaredNorm() / static_cast<double>(d)).array() +
       epsilon)
          .rsqrt()
          .matrix();
  Matrix normed = centered * inv_std.asDiagonal();
  Matrix out = (gain.value().col(0).asDiagonal() * normed).colwise() +
               bias.value().col(0);
  return x.graph()->Record(
      std::move(out), {x, gain, bias},
      [x, gain, bias, normed = std::move(normed), inv_std](
          Graph& g, const Matrix& grad, const Matrix&) {
        const double dd = static_cast<double>(normed.rows());
        if (g.RequiresGrad(gain)) {
          g.Accumulate(gain, grad.cwiseProduct(normed).rowwise().sum());
        }
        if (g.RequiresGrad(bias)) g.Accumulate(bias, grad.rowwise().sum());
        if (g.RequiresGrad(x)) {
          const Matrix gn = g.value(gain).col(0).asDiagonal() * grad;
          const Eigen::RowVectorXd mean_gn = gn.colwise().sum() / dd;
          const Eigen::RowVectorXd mean_gnx =
              gn.cwiseProduct(normed).colwise().sum() / dd;
          Matrix gx = gn.rowwise() - mean_gn;
          gx -= normed * mean_gnx.asDiagonal();
          g.Accumulate(x, gx * inv_std.asDiagonal());
        }
      });
}

Var Conv1dSame(Var x, Var kernel, Var bias, int width, Eigen::Index segment) {
  if (width <= 0 || width % 2 == 0) {
    throw ConfigError("conv1d: kernel width must be odd and positive, got " +
                      std::to_string(width));
  }
  const Matrix& xv = x.value();
  const Eigen::Index d_in = xv.rows();
  const Eigen::Index len = xv.cols();
  const Matrix& kv = kernel.value();
  if (kv.cols() != width * d_in) Mismatch("conv1d", xv, kv);
  if (bias.valid() && (bias.rows() != kv.rows() || bias.cols() != 1)) {
    Mismatch("conv1d", kv, bias.value());
  }
  const Eigen::Index seg = segment > 0 ? segment : len;
  if (len % seg != 0) {
    throw DimensionError("conv1d: length " + std::to_string(len) +
                         " is not a multiple of the segment " + std::to_string(seg));
  }
  const int half = (width - 1) / 2;
  // Unfold into (width * d_in) x l so the conv becomes a single product.
  Matrix unfolded = Matrix::Zero(width * d_in, len);
  for (int t = 0; t < width; ++t) {
    const int shift = t - half;
    for (Eigen::Index i = 0; i < len; ++i) {
      const Eigen::Index pos = i % seg + shift;
      if (pos < 0 || pos >= seg) continue;
      unfolded.block(t * d_in, i, d_in, 1) = xv.col(i + shift);
    }
  }
  Matrix out(kv.rows(), len);
  out.noalias() = kv * unfolded;
  if (bias.valid()) out.colwise() += bias.value().col(0);
  std::vector<Var> inputs = {x, kernel};
  if (bias.valid()) inputs.push_back(bias);
  return x.graph()->Record(
      std::move(out), inputs,
      [x, kernel, bias, width, half, seg, unfolded = std::move(unfolded)](
          Graph& g, const Matrix& grad, const Matrix&) {
        if (g.RequiresGrad(kernel)) {
          Matrix gk(g.value(kernel).rows(), g.value(kernel).cols());
          gk.noalias() = grad * unfolded.transpose();
          g.Accumulate(kernel, gk);
        }
        if (bias.valid() && g.RequiresGrad(bias)) {
          g.Accumulate(bias, grad.rowwise().sum());
        }
        if (g.RequiresGrad(x)) {
          Matrix gu(unfolded.rows(), unfolded.cols());
          gu.noalias() = g.value(kernel).transpose() * grad;
          const Eigen::Index din = g.value(x).rows();
          const Eigen::Index n = g.value(x).cols();
          Matrix gx = Matrix::Zero(din, n);
          for (int t = 0; t < width; ++t) {
            const int shift = t - half;
            for (Eigen::Index i = 0; i < n; ++i) {
              const Eigen::Index pos = i % seg + shift;
              if (pos < 0 || pos >= seg) continue;
              gx.col(i + shift) += gu.block(t * din, i, din, 1);
            }
          }
          g.Accumulate(x, gx);
        }
      });
}

Var ConcatRows(const std::vector<Var>& parts) {
  if (parts.empty()) throw DimensionError("concat_rows: no inputs");
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts[0].cols();
  for (const Var& p : parts) {
    if (p.cols() != cols) Mismatch("concat_rows", parts[0].value(), p.value());
    rows += p.rows();
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const Var& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  return parts[0].graph()->Record(
      std::move(out), parts, [parts](Graph& g, const Matrix& grad, const Matrix&) {
        Eigen::Index at = 0;
        for (const Var& p : parts) {
          if (g.RequiresGrad(p)) g.Accumulate(p, grad.middleRows(at, p.rows()));
          at += p.rows();
        }
      });
}

Var ConcatCols(const std::vector<Var>& parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const Var& p : parts) {
    if (p.rows() != rows) Mismatch("concat_cols", parts[0].value(), p.value());
    cols += p.cols();
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const Var& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return parts[0].graph()->Record(
      std::move(out), parts, [parts](Graph& g, const Matrix& grad, const Matrix&) {
        Eigen::Index at = 0;
        for (const Var& p : parts) {
          if (g.RequiresGrad(p)) g.Accumulate(p, grad.middleCols(at, p.cols()));
          at += p.cols();
        }
      });
}

Var SliceRows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows()) {
    throw DimensionError("slice_rows: [" + std::to_string(start) + ", +" +
                         std::to_string(count) + ") out of " + ShapeOf(a.value()));
  }
  return a.graph()->Record(
      a.value().middleRows(start, count), {a},
      [a, start, count](Graph& g, const Matrix& grad, const Matrix&) {
        Matrix* ga = g.GradBuffer(a);
        if (ga != nullptr) ga->middleRows(start, count) += grad;
      });
}

Var SliceCols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw DimensionError("slice_cols: [" + std::to_string(start) + ", +" +
                         std::to_string(count) + ") out of " + ShapeOf(a.value()));
  }
  return a.graph()->Record(
      a.value().middleCols(start, count), {a},
      [a, start, count](Graph& g, const Matrix& grad, const Matrix&) {
        Matrix* ga = g.GradBuffer(a);
        if (ga != nullptr) ga->middleCols(start, count) += grad;
      });
}

Var Gather(Var table, std::span<const int> ids) {
  const Matrix& tv = table.value();
  Matrix out(tv.rows(), static_cast<Eigen::Index>(ids.size()));
  for (size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] < 0 || ids[k] >= tv.cols()) {
      throw DimensionError("gather: id " + std::to_string(ids[k]) +
                           " out of range for table " + ShapeOf(tv));
    }
    out.col(k) = tv.col(ids[k]);
  }
  std::vector<int> idx(ids.begin(), ids.end());
  return table.graph()->Record(
      std::move(out), {table},
      [table, idx = std::move(idx)](Graph& g, const Matrix& grad, const Matrix&) {
        Matrix* gt = g.GradBuffer(table);
        if (gt == nullptr) return;
        for (size_t k = 0; k < idx.size(); ++k) gt->col(idx[k]) += grad.col(k);
      });
}

Var RepeatColumn(Var col, Eigen::Index n) {
  if (col.cols() != 1) {
    throw DimensionError("repeat_column: expected a column, got " +
                         ShapeOf(col.value()));
  }
  return col.graph()->Record(
      col.value().replicate(1, n), {col},
      [col](Graph& g, const Matrix& grad, const Matrix&) {
        g.Accumulate(col, grad.rowwise().sum());
      });
}

Var MaskColumns(Var a, std::span<const char> col_mask) {
  if (static_cast<Eigen::Index>(col_mask.size()) != a.cols()) {
    throw DimensionError("mask_columns: mask length " +
                         std::to_string(col_mask.size()) + " vs " +
                         ShapeOf(a.value()));
  }
  Matrix out = a.value();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    if (col_mask[c] == 0) out.col(c).setZero();
  }
  std::vector<char> mask(col_mask.begin(), col_mask.end());
  return a.graph()->Record(
      std::move(out), {a},
      [a, mask = std::move(mask)](Graph& g, const Matrix& grad, const Matrix&) {
        Matrix ga = grad;
        for (Eigen::Index c = 0; c < ga.cols(); ++c) {
          if (mask[c] == 0) ga.col(c).setZero();
        }
        g.Accumulate(a, ga);
      });
}

Var MaskedMeanColumns(Var a, std::span<const char> col_mask) {
  if (static_cast<Eigen::Index>(col_mask.size()) != a.cols()) {
    throw DimensionError("masked_mean: mask length " +
                         std::to_string(col_mask.size()) + " vs " +
                         ShapeOf(a.value()));
  }
  Matrix weights = Matrix::Zero(a.cols(), 1);
  double count = 0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    if (col_mask[c] != 0) {
      weights(c, 0) = 1.0;
      ++count;
    }
  }
  if (count == 0) throw DimensionError("masked_mean: every column is masked");
  weights /= count;
  return MatMul(a, a.graph()->Constant(std::move(weights)));
}

Var SpdSolve(Var a, Var b) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != av.cols() || av.rows() != bv.rows()) Mismatch("spd_solve", av, bv);
  Eigen::LLT<Matrix> llt(av);
  if (llt.info() != Eigen::Success) {
    throw NumericError("spd_solve: matrix is not positive definite");
  }
  Matrix x = llt.solve(bv);
  if (!x.allFinite()) throw NumericError("spd_solve: non-finite solution");
  return a.graph()->Record(
      std::move(x), {a, b},
      [a, b, llt = std::move(llt)](Graph& g, const Matrix& grad, const Matrix& x) {
        // x = A^{-1} b with A symmetric: db = A^{-1} dx, dA = -db x^T.
        const Matrix gb = llt.solve(grad);
        if (g.RequiresGrad(b)) g.Accumulate(b, gb);
        if (g.RequiresGrad(a)) {
          Matrix ga(x.rows(), x.rows());
          ga.noalias() = -gb * x.transpose();
          g.Accumulate(a, ga);
        }
      });
}

Var ColumnDot(Var a, Var b) {
  RequireSameShape("column_dot", a.value(), b.value());
  Matrix out = a.value().cwiseProduct(b.value()).colwise().sum();
  return a.graph()->Record(std::move(out), {a, b},
                           [a, b](Graph& g, const Matrix& grad, const Matrix&) {
                             if (g.RequiresGrad(a)) {
                               g.Accumulate(a, g.value(b) * grad.row(0).asDiagonal());
                             }
                             if (g.RequiresGrad(b)) {
                               g.Accumulate(b, g.value(a) * grad.row(0).asDiagonal());
                             }
                           });
}

namespace {

void CheckOffsets(const char* op, std::span<const int> offsets, Eigen::Index n) {
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != n) {
    throw DimensionError(std::string(op) + ": offsets must run from 0 to " +
                         std::to_string(n));
  }
  for (size_t b = 0; b + 1 < offsets.size(); ++b) {
    if (offsets[b + 1] <= offsets[b]) {
      throw DimensionError(std::string(op) + ": empty segment " + std::to_string(b));
    }
  }
}

}  // namespace

Var SegmentSoftmax(Var scores, std::span<const int> offsets, std::span<const char> mask) {
  const Matrix& sv = scores.value();
  if (sv.rows() != 1) {
    throw DimensionError("segment_softmax: expected a row, got " + ShapeOf(sv));
  }
  CheckOffsets("segment_softmax", offsets, sv.cols());
  if (!mask.empty() && static_cast<Eigen::Index>(mask.size()) != sv.cols()) {
    throw DimensionError("segment_softmax: mask length " + std::to_string(mask.size()) +
                         " vs " + ShapeOf(sv));
  }
  Matrix out = Matrix::Zero(1, sv.cols());
  for (size_t b = 0; b + 1 < offsets.size(); ++b) {
    double max = -std::numeric_limits<double>::infinity();
    for (int i = offsets[b]; i < offsets[b + 1]; ++i) {
      if (Active(mask, i)) max = std::max(max, sv(0, i));
    }
    if (max == -std::numeric_limits<double>::infinity()) {
      throw DimensionError("segment_softmax: segment " + std::to_string(b) +
                           " has no active entry");
    }
    double total = 0.0;
    for (int i = offsets[b]; i < offsets[b + 1]; ++i) {
      if (!Active(mask, i)) continue;
      out(0, i) = std::exp(sv(0, i) - max);
      total += out(0, i);
    }
    for (int i = offsets[b]; i < offsets[b + 1]; ++i) out(0, i) /= total;
  }
  std::vector<int> bounds(offsets.begin(), offsets.end());
  return scores.graph()->Record(
      std::move(out), {scores},
      [scores, bounds = std::move(bounds)](Graph& g, const Matrix& grad, const Matrix& y) {
        Matrix dz = y.cwiseProduct(grad);
        for (size_t b = 0; b + 1 < bounds.size(); ++b) {
          const int start = bounds[b];
          const int count = bounds[b + 1] - start;
          const double dot = dz.block(0, start, 1, count).sum();
          dz.block(0, start, 1, count) -= dot * y.block(0, start, 1, count);
        }
        g.Accumulate(scores, dz);
      });
}

Var SegmentWeightedSum(Var values, Var weights, std::span<const int> offsets) {
  const Matrix& vv = values.value();
  const Matrix& wv = weights.value();
  if (wv.rows() != 1 || wv.cols() != vv.cols()) Mismatch("segment_weighted_sum", vv, wv);
  CheckOffsets("segment_weighted_sum", offsets, vv.cols());
  const Eigen::Index segments = static_cast<Eigen::Index>(offsets.size()) - 1;
  Matrix out = Matrix::Zero(vv.rows(), segments);
  for (Eigen::Index b = 0; b < segments; ++b) {
    for (int i = offsets[b]; i < offsets[b + 1]; ++i) out.col(b) += wv(0, i) * vv.col(i);
  }
  std::vector<int> bounds(offsets.begin(), offsets.end());
  return values.graph()->Record(
      std::move(out), {values, weights},
      [values, weights, bounds = std::move(bounds)](Graph& g, const Matrix& grad,
                                                     const Matrix&) {
        const Matrix& vv = g.value(values);
        const Matrix& wv = g.value(weights);
        const bool need_v = g.RequiresGrad(values);
        const bool need_w = g.RequiresGrad(weights);
        Matrix gv = need_v ? Matrix::Zero(vv.rows(), vv.cols()) : Matrix();
        Matrix gw = need_w ? Matrix::Zero(1, vv.cols()) : Matrix();
        for (size_t b = 0; b + 1 < bounds.size(); ++b) {
          for (int i = bounds[b]; i < bounds[b + 1]; ++i) {
            if (need_v) gv.col(i) = wv(0, i) * grad.col(b);
            if (need_w) gw(0, i) = vv.col(i).dot(grad.col(b));
          }
        }
        if (need_v) g.Accumulate(values, gv);
        if (need_w) g.Accumulate(weights, gw);
      });
}

Var MultiHeadAttention(Var q, Var k, Var v, int heads, Eigen::Index segment,
                       std::span<const char> key_mask) {
  const Matrix& qv = q.value();
  RequireSameShape("attention", qv, k.value());
  RequireSameShape("attention", qv, v.value());
  const Eigen::Index d = qv.rows();
  const Eigen::Index n = qv.cols();
  if (heads <= 0 || d % heads != 0) {
    throw ConfigError("attention: " + std::to_string(d) + " rows do not split into " +
                      std::to_string(heads) + " heads");
  }
  if (segment <= 0 || n % segment != 0) {
    throw DimensionError("attention: length " + std::to_string(n) +
                         " is not a multiple of the segment " + std::to_string(segment));
  }
  if (!key_mask.empty() && static_cast<Eigen::Index>(key_mask.size()) != n) {
    throw DimensionError("attention: mask length " + std::to_string(key_mask.size()) +
                         " vs " + ShapeOf(qv));
  }
  const Eigen::Index dh = d / heads;
  const Eigen::Index segments = n / segment;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  // probs[s * heads + h] is segment x segment: (key, query).
  std::vector<Matrix> probs(segments * heads);
  Matrix out(d, n);
  for (Eigen::Index s = 0; s < segments; ++s) {
    const Eigen::Index c0 = s * segment;
    std::vector<char> live(segment);
    bool any = false;
    for (Eigen::Index i = 0; i < segment; ++i) {
      live[i] = Active(key_mask, c0 + i) ? 1 : 0;
      any = any || live[i];
    }
    if (!any) {
      throw DimensionError("attention: segment " + std::to_string(s) + " has no active key");
    }
    for (int h = 0; h < heads; ++h) {
      const auto qs = qv.block(h * dh, c0, dh, segment);
      const auto ks = k.value().block(h * dh, c0, dh, segment);
      const auto vs = v.value().block(h * dh, c0, dh, segment);
      Matrix p(segment, segment);
      p.noalias() = ks.transpose() * qs;
      p *= scale;
      for (Eigen::Index j = 0; j < segment; ++j) {
        double max = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < segment; ++i) {
          if (live[i]) max = std::max(max, p(i, j));
        }
        double total = 0.0;
        for (Eigen::Index i = 0; i < segment; ++i) {
          p(i, j) = live[i] ? std::exp(p(i, j) - max) : 0.0;
          total += p(i, j);
        }
        p.col(j) /= total;
      }
      out.block(h * dh, c0, dh, segment).noalias() = vs * p;
      probs[s * heads + h] = std::move(p);
    }
  }
  return q.graph()->Record(
      std::move(out), {q, k, v},
      [q, k, v, heads, segment, dh, scale, probs = std::move(probs)](
          Graph& g, const Matrix& grad, const Matrix&) {
        const Matrix& qv = g.value(q);
        const Matrix& kv = g.value(k);
        const Matrix& vv = g.value(v);
        Matrix gq = Matrix::Zero(qv.rows(), qv.cols());
        Matrix gk = Matrix::Zero(qv.rows(), qv.cols());
        Matrix gv = Matrix::Zero(qv.rows(), qv.cols());
        const Eigen::Index segments = qv.cols() / segment;
        for (Eigen::Index s = 0; s < segments; ++s) {
          const Eigen::Index c0 = s * segment;
          for (int h = 0; h < heads; ++h) {
            const Matrix& p = probs[s * heads + h];
            const auto go = grad.block(h * dh, c0, dh, segment);
            gv.block(h * dh, c0, dh, segment).noalias() = go * p.transpose();
            Matrix gp(segment, segment);
            gp.noalias() = vv.block(h * dh, c0, dh, segment).transpose() * go;
            Matrix gs = p.cwiseProduct(gp);
            const Eigen::RowVectorXd dots = gs.colwise().sum();
            gs -= p * dots.asDiagonal();
            gs *= scale;
            gq.block(h * dh, c0, dh, segment).noalias() =
                kv.block(h * dh, c0, dh, segment) * gs;
            gk.block(h * dh, c0, dh, segment).noalias() =
                qv.block(h * dh, c0, dh, segment) * gs.transpose();
          }
        }
        g.Accumulate(q, gq);
        g.Accumulate(k, gk);
        g.Accumulate(v, gv);
      });
}

}  // namespace mvre
