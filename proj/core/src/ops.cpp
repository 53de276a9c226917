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

#include "grafn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "grafn/error.hpp"
#include "grafn/kernels.hpp"

namespace grafn::op {
namespace {

constexpr double kLogFloor = 1e-12;

void require_same_tape(Var a, Var b, const char* what) {
  if (&a.tape() != &b.tape()) {
    fail(ErrorKind::kUsage, std::string(what) + ": operands recorded on different tapes");
  }
}

void require_scalar(Var v, const char* what) {
  if (v.rows() != 1 || v.cols() != 1) {
    fail(ErrorKind::kShape, std::string(what) + ": expected 1x1, got " + v.value().shape());
  }
}

void check_rows(std::span<const std::uint32_t> rows, std::size_t n, const char* what) {
  for (std::uint32_t r : rows) {
    if (r >= n) {
      fail(ErrorKind::kShape, std::string(what) + ": row " + std::to_string(r) +
                                  " out of range for " + std::to_string(n) + " rows");
    }
  }
}

// Positive-entry pattern packed 64 entries per word.
std::uint64_t hash_mask(const DenseMatrix& x) {
  const auto v = x.values();
  std::uint64_t h = 0xcbf29ce484222325ULL ^ v.size();
  for (std::size_t base = 0; base < v.size(); base += 64) {
    const std::size_t end = std::min(v.size(), base + 64);
    std::uint64_t word = 0;
    for (std::size_t i = base; i < end; ++i) word |= std::uint64_t{v[i] > 0.0} << (i - base);
    h = (h ^ word) * 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return h;
}

}  // namespace

Var spmm(const CsrMatrix& a, Var x) {
  DenseMatrix out = grafn::spmm(a, x.value());
  auto held = std::make_shared<const CsrMatrix>(a);
  return x.tape().record(std::move(out), {x}, [held](const BackwardArgs& args) {
    if (args.input_grads[0] != nullptr) {
      args.input_grads[0]->axpy(1.0, spmm_transposed(*held, args.grad));
    }
  });
}

Var matmul(Var x, Var w) {
  require_same_tape(x, w, "matmul");
  DenseMatrix out = grafn::matmul(x.value(), w.value());
  return x.tape().record(std::move(out), {x, w}, [](const BackwardArgs& args) {
    if (args.input_grads[0] != nullptr) {
      args.input_grads[0]->axpy(1.0, matmul_nt(args.grad, *args.inputs[1]));
    }
    if (args.input_grads[1] != nullptr) {
      args.input_grads[1]->axpy(1.0, matmul_tn(*args.inputs[0], args.grad));
    }
  });
}

Var matmul_nt(Var x, Var y) {
  require_same_tape(x, y, "matmul_nt");
  DenseMatrix out = grafn::matmul_nt(x.value(), y.value());
  return x.tape().record(std::move(out), {x, y}, [](const BackwardArgs& args) {
    if (args.input_grads[0] != nullptr) {
      args.input_grads[0]->axpy(1.0, grafn::matmul(args.grad, *args.inputs[1]));
    }
    if (args.input_grads[1] != nullptr) {
      args.input_grads[1]->axpy(1.0, matmul_tn(args.grad, *args.inputs[0]));
    }
  });
}

Var add_row_bias(Var x, Var bias) {
  require_same_tape(x, bias, "add_row_bias");
  const DenseMatrix& b = bias.value();
  if (b.rows() != 1 || b.cols() != x.cols()) {
    fail(ErrorKind::kShape, "add_row_bias: bias " + b.shape() + " for input " + x.value().shape());
  }
  DenseMatrix out = x.value();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += b(0, c);
  }
  return x.tape().record(std::move(out), {x, bias}, [](const BackwardArgs& args) {
    if (args.input_grads[0] != nullptr) args.input_grads[0]->axpy(1.0, args.grad);
    if (DenseMatrix* gb = args.input_grads[1]) {
      for (std::size_t r = 0; r < args.grad.rows(); ++r) {
        const auto row = args.grad.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) (*gb)(0, c) += row[c];
      }
    }
  });
}

Var add(Var a, Var b) {
  require_same_tape(a, b, "add");
  if (!a.value().same_shape(b.value())) {
    fail(ErrorKind::kShape, "add: " + a.value().shape() + " vs " + b.value().shape());
  }
  DenseMatrix out = a.value();
  out.axpy(1.0, b.value());
  return a.tape().record(std::move(out), {a, b}, [](const BackwardArgs& args) {
    for (DenseMatrix* g : args.input_grads) {
      if (g != nullptr) g->axpy(1.0, args.grad);
    }
  });
}

Var scale(Var x, double factor) {
  DenseMatrix out = x.value();
  for (double& v : out.values()) v *= factor;
  return x.tape().record(std::move(out), {x}, [factor](const BackwardArgs& args) {
    if (args.input_grads[0] != nullptr) args.input_grads[0]->axpy(factor, args.grad);
  });
}

Var relu(Var x) {
  DenseMatrix out = grafn::relu(x.value());
  x.tape().mix_regime(hash_mask(x.value()));
  return x.tape().record(std::move(out), {x}, [](const BackwardArgs& args) {
    DenseMatrix* g = args.input_grads[0];
    if (g == nullptr) return;
    const auto in = args.inputs[0]->values();
    const auto up = args.grad.values();
    auto dst = g->values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (in[i] > 0.0) dst[i] += up[i];
    }
  });
}

Var dropout(Var x, double p, Rng& rng, bool training) {
  check_probability(p, "dropout");
  if (!training || p == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - p);
  DenseMatrix out = x.value();
  auto o = out.values();
  auto keep = std::make_shared<std::vector<std::uint8_t>>(o.size());
  const DropMask mask(rng.next(), p);
  mask.fill_keep(*keep);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (*keep)[i] ? o[i] * keep_scale : 0.0;
  return x.tape().record(std::move(out), {x}, [keep, keep_scale](const BackwardArgs& args) {
    DenseMatrix* g = args.input_grads[0];
    if (g == nullptr) return;
    const auto up = args.grad.values();
    auto dst = g->values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if ((*keep)[i]) dst[i] += keep_scale * up[i];
    }
  });
}

Var center_columns(Var x) {
  // The map is a symmetric projection, so the backward pass centers the gradient.
  return x.tape().record(grafn::center_columns(x.value()), {x}, [](const BackwardArgs& args) {
    if (args.input_grads[0] != nullptr) {
      args.input_grads[0]->axpy(1.0, grafn::center_columns(args.grad));
    }
  });
}

Var row_normalize(Var x, double eps) {
  const DenseMatrix& in = x.value();
  auto inv_norms = std::make_shared<std::vector<double>>(in.rows());
  DenseMatrix out = in;
  for (std::size_t r = 0; r < in.rows(); ++r) {
    double sq = 0.0;
    for (double v : in.row(r)) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm == 0.0 && eps == 0.0) {
      fail(ErrorKind::kNumerical, "row_normalize: zero-norm row " + std::to_string(r));
    }
    // Rows below the floor are scaled by a constant; their gradient is 1/eps.
    const bool clamped = norm < eps;
    const double inv = 1.0 / (clamped ? eps : norm);
    (*inv_norms)[r] = clamped ? -inv : inv;
    for (double& v : out.row(r)) v *= inv;
  }
  return x.tape().record(std::move(out), {x}, [inv_norms](const BackwardArgs& args) {
    DenseMatrix* g = args.input_grads[0];
    if (g == nullptr) return;
    for (std::size_t r = 0; r < args.value.rows(); ++r) {
      const double signed_inv = (*inv_norms)[r];
      const auto y = args.value.row(r);
      const auto up = args.grad.row(r);
      auto dst = g->row(r);
      if (signed_inv < 0.0) {
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += -signed_inv * up[c];
        continue;
      }
      double proj = 0.0;
      for (std::size_t c = 0; c < y.size(); ++c) proj += y[c] * up[c];
      for (std::size_t c = 0; c < dst.size(); ++c) {
        dst[c] += signed_inv * (up[c] - y[c] * proj);
      }
    }
  });
}

Var row_dot(Var x, Var y) {
  require_same_tape(x, y, "row_dot");
  if (!x.value().same_shape(y.value())) {
    fail(ErrorKind::kShape, "row_dot: " + x.value().shape() + " vs " + y.value().shape());
  }
  DenseMatrix out(x.rows(), 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto a = x.value().row(r);
    const auto b = y.value().row(r);
    double dot = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) dot += a[c] * b[c];
    out(r, 0) = dot;
  }
  return x.tape().record(std::move(out), {x, y}, [](const BackwardArgs& args) {
    for (int side = 0; side < 2; ++side) {
      DenseMatrix* g = args.input_grads[side];
      if (g == nullptr) continue;
      const DenseMatrix& other = *args.inputs[1 - side];
      for (std::size_t r = 0; r < g->rows(); ++r) {
        const double up = args.grad(r, 0);
        const auto o = other.row(r);
        auto dst = g->row(r);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += up * o[c];
      }
    }
  });
}

Var row_cosine(Var x, Var y, double eps) {
  return row_dot(row_normalize(x, eps), row_normalize(y, eps));
}

Var mean(Var x) {
  const DenseMatrix& in = x.value();
  if (in.empty()) fail(ErrorKind::kShape, "mean: empty input");
  double total = 0.0;
  for (double v : in.values()) total += v;
  const double n = static_cast<double>(in.size());
  return x.tape().record(DenseMatrix(1, 1, total / n), {x}, [n](const BackwardArgs& args) {
    DenseMatrix* g = args.input_grads[0];
    if (g == nullptr) return;
    const double up = args.grad(0, 0) / n;
    for (double& v : g->values()) v += up;
  });
}

Var sum(Var x) {
  double total = 0.0;
  for (double v : x.value().values()) total += v;
  return x.tape().record(DenseMatrix(1, 1, total), {x}, [](const BackwardArgs& args) {
    DenseMatrix* g = args.input_grads[0];
    if (g == nullptr) return;
    const double up = args.grad(0, 0);
    for (double& v : g->values()) v += up;
  });
}

Var gather_rows(Var x, std::span<const std::uint32_t> rows) {
  check_rows(rows, x.rows(), "gather_rows");
  auto idx = std::make_shared<std::vector<std::uint32_t>>(rows.begin(), rows.end());
  DenseMatrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(x.value().row(rows[i]).begin(), x.cols(), out.row(i).begin());
  }
  return x.tape().record(std::move(out), {x}, [idx](const BackwardArgs& args) {
    DenseMatrix* g = args.input_grads[0];
    if (g == nullptr) return;
    for (std::size_t i = 0; i < idx->size(); ++i) {
      const auto up = args.grad.row(i);
      auto dst = g->row((*idx)[i]);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += up[c];
    }
  });
}

Var softmax_rows(Var x) {
  DenseMatrix out = x.value();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    if (row.empty()) continue;
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return x.tape().record(std::move(out), {x}, [](const BackwardArgs& args) {
    DenseMatrix* g = args.input_grads[0];
    if (g == nullptr) return;
    for (std::size_t r = 0; r < args.value.rows(); ++r) {
      const auto s = args.value.row(r);
      const auto up = args.grad.row(r);
      double inner = 0.0;
      for (std::size_t c = 0; c < s.size(); ++c) inner += s[c] * up[c];
      auto dst = g->row(r);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += s[c] * (up[c] - inner);
    }
  });
}

Var cross_entropy(Var target, Var pred, std::span<const std::uint32_t> rows) {
  require_same_tape(target, pred, "cross_entropy");
  if (!target.value().same_shape(pred.value())) {
    fail(ErrorKind::kShape,
         "cross_entropy: target " + target.value().shape() + " vs pred " + pred.value().shape());
  }
  check_rows(rows, pred.rows(), "cross_entropy");
  auto idx = std::make_shared<std::vector<std::uint32_t>>(rows.begin(), rows.end());
  double total = 0.0;
  for (std::uint32_t r : rows) {
    const auto t = target.value().row(r);
    const auto p = pred.value().row(r);
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (t[c] != 0.0) total -= t[c] * std::log(std::max(p[c], kLogFloor));
    }
  }
  const double n = static_cast<double>(rows.size());
  const double loss = rows.empty() ? 0.0 : total / n;
  return pred.tape().record(
      DenseMatrix(1, 1, loss), {target, pred}, [idx, n](const BackwardArgs& args) {
        if (idx->empty()) return;
        const double up = args.grad(0, 0) / n;
        const DenseMatrix& t = *args.inputs[0];
        const DenseMatrix& p = *args.inputs[1];
        for (std::uint32_t r : *idx) {
          const auto tr = t.row(r);
          const auto pr = p.row(r);
          if (DenseMatrix* gt = args.input_grads[0]) {
            auto dst = gt->row(r);
            for (std::size_t c = 0; c < dst.size(); ++c) {
              dst[c] -= up * std::log(std::max(pr[c], kLogFloor));
            }
          }
          if (DenseMatrix* gp = args.input_grads[1]) {
            auto dst = gp->row(r);
            for (std::size_t c = 0; c < dst.size(); ++c) {
              if (tr[c] != 0.0 && pr[c] > kLogFloor) dst[c] -= up * tr[c] / pr[c];
            }
          }
        }
      });
}

Var softmax_cross_entropy(Var logits, std::span<const std::uint32_t> labels,
                          std::span<const std::uint32_t> rows) {
  if (rows.empty()) fail(ErrorKind::kUsage, "softmax_cross_entropy: empty row set");
  if (labels.size() != logits.rows()) {
    fail(ErrorKind::kShape, "softmax_cross_entropy: " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(logits.rows()) + " rows");
  }
  check_rows(rows, logits.rows(), "softmax_cross_entropy");
  const DenseMatrix& z = logits.value();
  auto probs = std::make_shared<DenseMatrix>(rows.size(), z.cols());
  auto idx = std::make_shared<std::vector<std::uint32_t>>(rows.begin(), rows.end());
  auto lab = std::make_shared<std::vector<std::uint32_t>>();
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = z.row(rows[i]);
    const std::uint32_t y = labels[rows[i]];
    if (y >= z.cols()) fail(ErrorKind::kData, "softmax_cross_entropy: label out of range");
    lab->push_back(y);
    const double peak = *std::max_element(row.begin(), row.end());
    double denom = 0.0;
    for (double v : row) denom += std::exp(v - peak);
    const double log_denom = std::log(denom);
    total -= row[y] - peak - log_denom;
    auto pr = probs->row(i);
    for (std::size_t c = 0; c < row.size(); ++c) pr[c] = std::exp(row[c] - peak - log_denom);
  }
  const double n = static_cast<double>(rows.size());
  return logits.tape().record(
      DenseMatrix(1, 1, total / n), {logits}, [probs, idx, lab, n](const BackwardArgs& args) {
        DenseMatrix* g = args.input_grads[0];
        if (g == nullptr) return;
        const double up = args.grad(0, 0) / n;
        for (std::size_t i = 0; i < idx->size(); ++i) {
          const auto pr = probs->row(i);
          auto dst = g->row((*idx)[i]);
          for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += up * pr[c];
          dst[(*lab)[i]] -= up;
        }
      });
}

Var weighted_sum(double w1, Var a, double w2, Var b, Var c) {
  require_same_tape(a, b, "weighted_sum");
  require_same_tape(a, c, "weighted_sum");
  require_scalar(a, "weighted_sum");
  require_scalar(b, "weighted_sum");
  require_scalar(c, "weighted_sum");
  const double value = w1 * a.scalar() + w2 * b.scalar() + c.scalar();
  return a.tape().record(DenseMatrix(1, 1, value), {a, b, c}, [w1, w2](const BackwardArgs& args) {
    const double up = args.grad(0, 0);
    if (args.input_grads[0] != nullptr) (*args.input_grads[0])(0, 0) += w1 * up;
    if (args.input_grads[1] != nullptr) (*args.input_grads[1])(0, 0) += w2 * up;
    if (args.input_grads[2] != nullptr) (*args.input_grads[2])(0, 0) += up;
  });
}

}  // namespace grafn::op
