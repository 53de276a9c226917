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

#include <cmath>
#include <functional>

#include "grafn/error.hpp"
#include "grafn/gradcheck.hpp"
#include "grafn/kernels.hpp"
#include "grafn/ops.hpp"
#include "testing.hpp"

using namespace grafn;
using grafn::testing::random_dense;
using grafn::testing::random_sparse_dense;

namespace {

// sum_ij v_ij * r_ij for a fixed random r, so every output entry matters.
Var project(Var v, const DenseMatrix& r) {
  return op::sum(op::row_dot(v, v.tape().constant(r)));
}

// Checks the tape gradient of `build` w.r.t. `params` by central differences.
double check(std::vector<Parameter*> params, const std::function<Var(Tape&)>& build) {
  auto loss_fn = [&](bool backprop) {
    Tape tape;
    Var loss = build(tape);
    if (backprop) {
      zero_grads(params);
      tape.backward(loss);
    }
    return LossEvaluation{loss.scalar(), tape.regime()};
  };
  const GradCheckReport r = finite_diff_check(loss_fn, params);
  CHECK(r.checked > 0);
  return r.max_rel_error;
}

}  // namespace

TEST_CASE("quadratic loss gradient is exact") {
  Rng rng(1);
  Parameter w("w", random_dense(4, 3, rng));
  const double err = check({&w}, [&](Tape& t) {
    Var v = t.parameter(w);
    return op::sum(op::row_dot(v, v));
  });
  CHECK(err < 1e-7);
  // analytic gradient 2W
  Tape t;
  Var v = t.parameter(w);
  w.zero_grad();
  t.backward(op::sum(op::row_dot(v, v)));
  DenseMatrix twice = w.value;
  for (double& x : twice.values()) x *= 2.0;
  CHECK(max_abs_diff(w.grad, twice) < 1e-14);
}

TEST_CASE("every differentiable op matches finite differences") {
  Rng rng(7);
  Parameter a("a", random_dense(6, 4, rng));
  Parameter b("b", random_dense(4, 3, rng));
  Parameter c("c", random_dense(6, 4, rng));
  Parameter bias("bias", random_dense(1, 3, rng));
  const CsrMatrix s = CsrMatrix::from_dense(random_sparse_dense(6, 6, 0.4, rng));
  const DenseMatrix r63 = random_dense(6, 3, rng);
  const DenseMatrix r64 = random_dense(6, 4, rng);
  const DenseMatrix r66 = random_dense(6, 6, rng);
  const DenseMatrix r61 = random_dense(6, 1, rng);
  const std::vector<std::uint32_t> rows{0, 2, 2, 5};

  SUBCASE("spmm") {
    CHECK(check({&a}, [&](Tape& t) { return project(op::spmm(s, t.parameter(a)), r64); }) < 1e-6);
  }
  SUBCASE("matmul") {
    CHECK(check({&a, &b}, [&](Tape& t) {
            return project(op::matmul(t.parameter(a), t.parameter(b)), r63);
          }) < 1e-6);
  }
  SUBCASE("matmul_nt") {
    CHECK(check({&a, &c}, [&](Tape& t) {
            return project(op::matmul_nt(t.parameter(a), t.parameter(c)), r66);
          }) < 1e-6);
  }
  SUBCASE("bias, add, scale") {
    CHECK(check({&a, &b, &bias}, [&](Tape& t) {
            Var x = op::add_row_bias(op::matmul(t.parameter(a), t.parameter(b)), t.parameter(bias));
            return project(op::scale(op::add(x, x), -0.7), r63);
          }) < 1e-6);
  }
  SUBCASE("relu away from kinks") {
    CHECK(check({&a}, [&](Tape& t) { return project(op::relu(t.parameter(a)), r64); }) < 1e-6);
  }
  SUBCASE("center columns") {
    CHECK(check({&a}, [&](Tape& t) { return project(op::center_columns(t.parameter(a)), r64); }) <
          1e-6);
  }
  SUBCASE("dropout with a replayed mask") {
    CHECK(check({&a}, [&](Tape& t) {
            Rng local(3);
            return project(op::dropout(t.parameter(a), 0.4, local, true), r64);
          }) < 1e-6);
  }
  SUBCASE("row normalize and cosine") {
    CHECK(check({&a}, [&](Tape& t) { return project(op::row_normalize(t.parameter(a), 0.0), r64); }) <
          1e-6);
    CHECK(check({&a, &c}, [&](Tape& t) {
            return project(op::row_cosine(t.parameter(a), t.parameter(c), 0.0), r61);
          }) < 1e-6);
  }
  SUBCASE("mean and gather") {
    CHECK(check({&a}, [&](Tape& t) {
            return op::mean(op::scale(op::gather_rows(t.parameter(a), rows), 3.0));
          }) < 1e-6);
  }
  SUBCASE("softmax and cross entropy with both sides attached") {
    CHECK(check({&a, &c}, [&](Tape& t) {
            Var p = op::softmax_rows(t.parameter(a));
            Var q = op::softmax_rows(t.parameter(c));
            return op::cross_entropy(q, p, rows);
          }) < 1e-6);
  }
  SUBCASE("softmax cross entropy") {
    const std::vector<std::uint32_t> labels{0, 1, 2, 0, 1, 2};
    CHECK(check({&a, &b}, [&](Tape& t) {
            return op::softmax_cross_entropy(op::matmul(t.parameter(a), t.parameter(b)), labels,
                                             rows);
          }) < 1e-6);
  }
  SUBCASE("weighted sum") {
    CHECK(check({&a, &c}, [&](Tape& t) {
            Var x = op::mean(t.parameter(a));
            Var y = op::sum(t.parameter(c));
            return op::weighted_sum(0.5, x, 2.0, y, op::mean(op::relu(t.parameter(c))));
          }) < 1e-6);
  }
}

TEST_CASE("softmax rows sum to one and cross entropy floors the log") {
  Rng rng(2);
  Tape t;
  Var s = op::softmax_rows(t.constant(random_dense(5, 4, rng, -50.0, 50.0)));
  for (std::size_t r = 0; r < 5; ++r) {
    double total = 0.0;
    for (double v : s.value().row(r)) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  Var target = t.constant(DenseMatrix(1, 2, std::vector<double>{1.0, 0.0}));
  Var pred = t.constant(DenseMatrix(1, 2, std::vector<double>{0.0, 1.0}));
  const std::vector<std::uint32_t> row0{0};
  CHECK(op::cross_entropy(target, pred, row0).scalar() == doctest::Approx(-std::log(1e-12)));
  CHECK(op::cross_entropy(target, pred, {}).scalar() == 0.0);
}

TEST_CASE("detach blocks gradient flow") {
  Parameter w("w", DenseMatrix(1, 1, 3.0));
  Tape t;
  Var v = t.parameter(w);
  Var d = t.detach(v);
  CHECK(t.is_detached(d));
  CHECK_FALSE(t.requires_grad(d));
  CHECK(d.value() == v.value());
  w.zero_grad();
  // loss = v * detach(v): gradient is detach(v) only
  t.backward(op::sum(op::row_dot(v, d)));
  CHECK(w.grad(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("tape bookkeeping") {
  Parameter w("w", DenseMatrix(2, 2, 1.0));
  Tape t;
  Var a = t.parameter(w);
  Var b = t.parameter(w);
  CHECK(a.id() == b.id());
  CHECK(t.parameters().size() == 1);
  CHECK(t.owns(a));
  Tape other;
  CHECK_FALSE(other.owns(a));
  CHECK_THROWS_AS(op::add(a, other.constant(DenseMatrix(2, 2))), Error);

  CHECK_THROWS_AS(t.backward(a), Error);  // not 1x1
  Var loss = op::sum(a);
  w.zero_grad();
  t.backward(loss);
  CHECK(w.grad == DenseMatrix(2, 2, 1.0));
  CHECK_THROWS_AS(t.backward(loss), Error);  // once only
}

TEST_CASE("gradients accumulate across shared uses") {
  Parameter w("w", DenseMatrix(1, 3, std::vector<double>{1.0, 2.0, 3.0}));
  Tape t;
  Var v = t.parameter(w);
  w.zero_grad();
  t.backward(op::add(op::sum(v), op::scale(op::sum(v), 2.0)));
  CHECK(w.grad == DenseMatrix(1, 3, 3.0));
}

TEST_CASE("row normalize with a floor handles zero rows") {
  Tape t;
  Var x = t.constant(DenseMatrix(2, 2, std::vector<double>{0.0, 0.0, 3.0, 4.0}));
  CHECK_THROWS_AS(op::row_normalize(x, 0.0), Error);
  Var n = op::row_normalize(x, 1e-12);
  CHECK(n.value()(0, 0) == 0.0);
  CHECK(n.value()(1, 0) == doctest::Approx(0.6));
}

TEST_CASE("relu mask changes are visible in the regime fingerprint") {
  auto regime_of = [](double v) {
    Tape t;
    op::relu(t.constant(DenseMatrix(1, 2, std::vector<double>{v, 1.0})));
    return t.regime();
  };
  CHECK(regime_of(0.5) == regime_of(0.7));
  CHECK(regime_of(0.5) != regime_of(-0.5));
}

TEST_CASE("finite difference check reports nondeterministic losses") {
  Parameter w("w", DenseMatrix(1, 1, 1.0));
  int calls = 0;
  auto loss_fn = [&](bool) { return LossEvaluation{static_cast<double>(calls++), 0}; };
  std::vector<Parameter*> ps{&w};
  CHECK_THROWS_AS(finite_diff_check(loss_fn, ps), Error);
}

TEST_CASE("finite difference check skips regime changes") {
  Parameter w("w", DenseMatrix(1, 1, 1e-7));  // |w| < eps: relu kink inside the stencil
  std::vector<Parameter*> ps{&w};
  auto loss_fn = [&](bool backprop) {
    Tape t;
    Var loss = op::sum(op::relu(t.parameter(w)));
    if (backprop) {
      zero_grads(ps);
      t.backward(loss);
    }
    return LossEvaluation{loss.scalar(), t.regime()};
  };
  const GradCheckReport r = finite_diff_check(loss_fn, ps, 1e-5);
  CHECK(r.skipped == 1);
  CHECK(r.checked == 0);
}
