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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "grafn/dense.hpp"
#include "grafn/rng.hpp"
#include "grafn/sparse.hpp"
#include "grafn/tape.hpp"

namespace grafn {

struct ModelDims {
  std::size_t in_features = 0;
  std::size_t hidden = 0;
  std::size_t embed = 0;
  std::size_t classes = 0;
};

/// Two-layer GCN: Z = A_hat * relu(A_hat * X * W1) * W2.
struct GcnEncoder {
  Parameter w1;  // F x H
  Parameter w2;  // H x D
  double dropout = 0.0;
  bool center = false;  // subtract the per-dimension mean of Z over nodes
};

/// logits = Z * Wc + bc
struct LinearHead {
  Parameter wc;  // D x C
  Parameter bc;  // 1 x C
};

struct Model {
  GcnEncoder encoder;
  LinearHead head;

  ModelDims dims() const;
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
};

/// Glorot-uniform weights and zero bias, deterministic in `seed`.
Model init_params(const ModelDims& dims, double dropout, std::uint64_t seed);

/// Records the encoder on `tape`. Dropout (input and hidden) is active only
/// when `training` is set.
Var encode(Tape& tape, GcnEncoder& enc, const SparseAdjacency& norm_adj, const CsrMatrix& x,
           bool training, Rng& rng);
Var encode(Tape& tape, GcnEncoder& enc, const SparseAdjacency& norm_adj, const DenseMatrix& x,
           bool training, Rng& rng);
Var classify(Tape& tape, LinearHead& head, Var z);

/// Inference-mode embeddings without a tape.
DenseMatrix embed(const GcnEncoder& enc, const SparseAdjacency& norm_adj, const CsrMatrix& x);
DenseMatrix logits(const LinearHead& head, const DenseMatrix& z);

/// Row-wise argmax; ties go to the lower class index.
std::vector<std::uint32_t> argmax_rows(const DenseMatrix& scores);

/// Linear-head predictions on the clean graph. `norm_adj` must be
/// normalize_adjacency of the dataset adjacency.
std::vector<std::uint32_t> predict(const Model& model, const SparseAdjacency& norm_adj,
                                   const CsrMatrix& x);

/// Binary checkpoint: "GRAFN1", then per parameter a u32 name length, the
/// name, u32 rows, u32 cols and row-major f64 values, all little-endian.
void save_checkpoint(const Model& model, const std::filesystem::path& file);
Model load_checkpoint(const std::filesystem::path& file);

}  // namespace grafn
