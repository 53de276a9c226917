// Copyright 2026 The grafn Authors. All Rights Reserved.
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

#include "grafn/kernels.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "grafn/error.hpp"

namespace grafn {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap view(const DenseMatrix& m) {
  return ConstMap(m.data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}

MutMap view(DenseMatrix& m) {
  return MutMap(m.data(), static_cast<Eigen::Index>(m.rows()),
                static_cast<Eigen::Index>(m.cols()));
}

[[noreturn]] void shape_error(const char* op, const std::string& a, const std::string& b) {
  fail(ErrorKind::kShape, std::string(op) + ": incompatible shapes " + a + " and " + b);
}

std::string csr_shape(const CsrMatrix& a) {
  return std::to_string(a.rows) + "x" + std::to_string(a.cols);
}

}  // namespace

DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& x) {
  if (a.cols != x.rows()) shape_error("spmm", csr_shape(a), x.shape());
  DenseMatrix out(a.rows, x.cols());
  const std::size_t width = x.cols();
  for (std::size_t r = 0; r < a.rows; ++r) {
    double* dst = out.data() + r * width;
    for (std::size_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      const double w = a.values[k];
      const double* src = x.data() + static_cast<std::size_t>(a.col_indices[k]) * width;
      for (std::size_t c = 0; c < width; ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

DenseMatrix spmm_transposed(const CsrMatrix& a, const DenseMatrix& x) {
  if (a.rows != x.rows()) shape_error("spmm_transposed", csr_shape(a), x.shape());
  DenseMatrix out(a.cols, x.cols());
  const std::size_t width = x.cols();
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* src = x.data() + r * width;
    for (std::size_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      const double w = a.values[k];
      double* dst = out.data() + static_cast<std::size_t>(a.col_indices[k]) * width;
      for (std::size_t c = 0; c < width; ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a.shape(), b.shape());
  DenseMatrix out(a.rows(), b.cols());
  if (a.cols() > 0) view(out).noalias() = view(a) * view(b);
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a.shape(), b.shape());
  DenseMatrix out(a.rows(), b.rows());
  if (a.cols() > 0) view(out).noalias() = view(a) * view(b).transpose();
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) shape_error("matmul_tn", a.shape(), b.shape());
  DenseMatrix out(a.cols(), b.cols());
  if (a.rows() > 0) view(out).noalias() = view(a).transpose() * view(b);
  return out;
}

DenseMatrix relu(const DenseMatrix& x) {
  DenseMatrix out = x;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

DenseMatrix center_columns(const DenseMatrix& x) {
  DenseMatrix out = x;
  if (x.rows() == 0) return out;
  std::vector<double> mean(x.cols(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) mean[c] += row[c];
  }
  for (double& m : mean) m /= static_cast<double>(x.rows());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] -= mean[c];
  }
  return out;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p < 1.0)) {
    fail(ErrorKind::kUsage, std::string(what) + ": probability " + std::to_string(p) +
                                " outside [0, 1)");
  }
}

DenseMatrix dropout(const DenseMatrix& x, double p, Rng& rng, bool training) {
  check_probability(p, "dropout");
  if (!training || p == 0.0) return x;
  DenseMatrix out = x;
  const double keep_scale = 1.0 / (1.0 - p);
  for (double& v : out.values()) v = rng.bernoulli(p) ? 0.0 : v * keep_scale;
  return out;
}

std::vector<double> row_cosine(const DenseMatrix& x, const DenseMatrix& y) {
  if (!x.same_shape(y)) shape_error("row_cosine", x.shape(), y.shape());
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double dot = 0.0, nx = 0.0, ny = 0.0;
    const auto a = x.row(r);
    const auto b = y.row(r);
    for (std::size_t c = 0; c < a.size(); ++c) {
      dot += a[c] * b[c];
      nx += a[c] * a[c];
      ny += b[c] * b[c];
    }
    if (nx == 0.0 || ny == 0.0) {
      fail(ErrorKind::kNumerical, "row_cosine: zero-norm row " + std::to_string(r));
    }
    out[r] = std::clamp(dot / (std::sqrt(nx) * std::sqrt(ny)), -1.0, 1.0);
  }
  return out;
}

DenseMatrix row_l2_normalize(const DenseMatrix& x) {
  DenseMatrix out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    double sq = 0.0;
    for (double v : row) sq += v * v;
    if (sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : row) v *= inv;
  }
  return out;
}

}  // namespace grafn
