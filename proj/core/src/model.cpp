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

#include "grafn/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include "grafn/error.hpp"
#include "grafn/kernels.hpp"
#include "grafn/ops.hpp"

namespace grafn {
namespace {

constexpr char kMagic[] = {'G', 'R', 'A', 'F', 'N', '1'};

DenseMatrix glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  DenseMatrix w(fan_in, fan_out);
  for (double& v : w.values()) v = rng.uniform(-limit, limit);
  return w;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return true;
}

bool get_f64(std::istream& in, double& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  v = std::bit_cast<double>(bits);
  return true;
}

DenseMatrix hidden_pre_activation(const GcnEncoder& enc, const SparseAdjacency& adj,
                                  const CsrMatrix& x) {
  return spmm(adj, spmm(x, enc.w1.value));
}

}  // namespace

ModelDims Model::dims() const {
  return {encoder.w1.value.rows(), encoder.w1.value.cols(), encoder.w2.value.cols(),
          head.wc.value.cols()};
}

std::vector<Parameter*> Model::parameters() {
  return {&encoder.w1, &encoder.w2, &head.wc, &head.bc};
}

std::vector<const Parameter*> Model::parameters() const {
  return {&encoder.w1, &encoder.w2, &head.wc, &head.bc};
}

Model init_params(const ModelDims& d, double dropout, std::uint64_t seed) {
  if (d.in_features == 0 || d.hidden == 0 || d.embed == 0 || d.classes == 0) {
    fail(ErrorKind::kUsage, "init_params: all model dimensions must be positive");
  }
  check_probability(dropout, "encoder dropout");
  Rng rng(seed);
  Model m;
  m.encoder.w1 = Parameter("encoder.W1", glorot(d.in_features, d.hidden, rng));
  m.encoder.w2 = Parameter("encoder.W2", glorot(d.hidden, d.embed, rng));
  m.encoder.dropout = dropout;
  m.head.wc = Parameter("head.Wc", glorot(d.embed, d.classes, rng));
  m.head.bc = Parameter("head.bc", DenseMatrix(1, d.classes));
  return m;
}

Var encode(Tape& tape, GcnEncoder& enc, const SparseAdjacency& norm_adj, const CsrMatrix& x,
           bool training, Rng& rng) {
  if (x.cols != enc.w1.value.rows()) {
    fail(ErrorKind::kShape, "encode: features have " + std::to_string(x.cols) +
                                " columns, W1 expects " + std::to_string(enc.w1.value.rows()));
  }
  if (norm_adj.rows != x.rows) {
    fail(ErrorKind::kShape, "encode: adjacency is " + std::to_string(norm_adj.rows) + "x" +
                                std::to_string(norm_adj.cols) + " for " +
                                std::to_string(x.rows) + " nodes");
  }
  const CsrMatrix* input = &x;
  CsrMatrix dropped;
  if (training && enc.dropout > 0.0) {
    // Dropout on stored entries only; zeros are unaffected either way.
    dropped = x;
    const double keep_scale = 1.0 / (1.0 - enc.dropout);
    std::vector<std::uint8_t> keep(dropped.values.size());
    DropMask(rng.next(), enc.dropout).fill_keep(keep);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      dropped.values[k] = keep[k] ? dropped.values[k] * keep_scale : 0.0;
    }
    input = &dropped;
  }
  Var w1 = tape.parameter(enc.w1);
  Var w2 = tape.parameter(enc.w2);
  Var h = op::relu(op::spmm(norm_adj, op::spmm(*input, w1)));
  h = op::dropout(h, enc.dropout, rng, training);
  Var z = op::spmm(norm_adj, op::matmul(h, w2));
  return enc.center ? op::center_columns(z) : z;
}

Var encode(Tape& tape, GcnEncoder& enc, const SparseAdjacency& norm_adj, const DenseMatrix& x,
           bool training, Rng& rng) {
  return encode(tape, enc, norm_adj, CsrMatrix::from_dense(x), training, rng);
}

Var classify(Tape& tape, LinearHead& head, Var z) {
  if (z.cols() != head.wc.value.rows()) {
    fail(ErrorKind::kShape, "classify: embeddings " + z.value().shape() + " for head " +
                                head.wc.value.shape());
  }
  return op::add_row_bias(op::matmul(z, tape.parameter(head.wc)), tape.parameter(head.bc));
}

DenseMatrix embed(const GcnEncoder& enc, const SparseAdjacency& norm_adj, const CsrMatrix& x) {
  if (x.cols != enc.w1.value.rows() || norm_adj.rows != x.rows) {
    fail(ErrorKind::kShape, "embed: input shape does not match the encoder");
  }
  DenseMatrix z =
      spmm(norm_adj, matmul(relu(hidden_pre_activation(enc, norm_adj, x)), enc.w2.value));
  return enc.center ? center_columns(z) : z;
}

DenseMatrix logits(const LinearHead& head, const DenseMatrix& z) {
  if (z.cols() != head.wc.value.rows()) {
    fail(ErrorKind::kShape, "logits: embeddings " + z.shape() + " for head " + head.wc.value.shape());
  }
  DenseMatrix out = matmul(z, head.wc.value);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += head.bc.value(0, c);
  }
  return out;
}

std::vector<std::uint32_t> argmax_rows(const DenseMatrix& scores) {
  std::vector<std::uint32_t> out(scores.rows());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto row = scores.row(r);
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    out[r] = static_cast<std::uint32_t>(best);
  }
  return out;
}

std::vector<std::uint32_t> predict(const Model& model, const SparseAdjacency& norm_adj,
                                   const CsrMatrix& x) {
  return argmax_rows(logits(model.head, embed(model.encoder, norm_adj, x)));
}

void save_checkpoint(const Model& model, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kData, "cannot write checkpoint " + file.string());
  out.write(kMagic, sizeof(kMagic));
  for (const Parameter* p : model.parameters()) {
    put_u32(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put_u32(out, static_cast<std::uint32_t>(p->value.rows()));
    put_u32(out, static_cast<std::uint32_t>(p->value.cols()));
    for (double v : p->value.values()) put_f64(out, v);
  }
  if (model.encoder.center) {
    // Stored as a 1x1 entry so checkpoints without it still load.
    const std::string name = "encoder.center";
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(out, 1);
    put_u32(out, 1);
    put_f64(out, 1.0);
  }
  if (!out) fail(ErrorKind::kData, "failed writing checkpoint " + file.string());
}

Model load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorKind::kData, "cannot open checkpoint " + file.string());
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    fail(ErrorKind::kData, file.string() + ": not a GRAFN1 checkpoint");
  }
  std::map<std::string, DenseMatrix> found;
  std::uint32_t name_len = 0;
  while (get_u32(in, name_len)) {
    if (name_len > 4096) fail(ErrorKind::kData, file.string() + ": corrupt parameter name");
    std::string name(name_len, '\0');
    std::uint32_t rows = 0, cols = 0;
    if (!in.read(name.data(), name_len) || !get_u32(in, rows) || !get_u32(in, cols)) {
      fail(ErrorKind::kData, file.string() + ": truncated parameter header");
    }
    DenseMatrix m(rows, cols);
    for (double& v : m.values()) {
      if (!get_f64(in, v)) fail(ErrorKind::kData, file.string() + ": truncated values of " + name);
    }
    found[name] = std::move(m);
  }
  auto take = [&](const std::string& name) {
    auto it = found.find(name);
    if (it == found.end()) fail(ErrorKind::kData, file.string() + ": missing parameter " + name);
    return Parameter(name, std::move(it->second));
  };
  Model m;
  m.encoder.w1 = take("encoder.W1");
  m.encoder.w2 = take("encoder.W2");
  m.head.wc = take("head.Wc");
  m.head.bc = take("head.bc");
  if (auto it = found.find("encoder.center"); it != found.end()) {
    m.encoder.center = it->second.size() == 1 && it->second.values()[0] != 0.0;
  }
  const ModelDims d = m.dims();
  if (m.encoder.w2.value.rows() != d.hidden || m.head.wc.value.rows() != d.embed ||
      m.head.bc.value.rows() != 1 || m.head.bc.value.cols() != d.classes) {
    fail(ErrorKind::kData, file.string() + ": inconsistent parameter shapes");
  }
  return m;
}

}  // namespace grafn
