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

#include "grafn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "grafn/error.hpp"

namespace grafn {

GradCheckReport finite_diff_check(const LossFn& loss_fn, std::span<Parameter* const> params,
                                  double eps, double abs_floor) {
  if (!(eps > 0.0)) fail(ErrorKind::kUsage, "finite_diff_check: eps must be positive");

  const LossEvaluation base = loss_fn(true);
  std::vector<DenseMatrix> analytic;
  analytic.reserve(params.size());
  for (const Parameter* p : params) analytic.push_back(p->grad);

  const LossEvaluation again = loss_fn(false);
  if (again.loss != base.loss || again.regime != base.regime) {
    fail(ErrorKind::kNumerical,
         "finite_diff_check: loss function is not deterministic (repeated evaluation differs)");
  }

  GradCheckReport report;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    auto values = p.value.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + eps;
      const LossEvaluation plus = loss_fn(false);
      values[k] = saved - eps;
      const LossEvaluation minus = loss_fn(false);
      values[k] = saved;
      if (plus.regime != base.regime || minus.regime != base.regime) {
        ++report.skipped;
        continue;
      }
      const double fd = (plus.loss - minus.loss) / (2.0 * eps);
      const double g = analytic[pi].values()[k];
      const double denom = std::max({std::abs(fd), std::abs(g), abs_floor});
      const double rel = std::abs(fd - g) / denom;
      ++report.checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_entry = p.name + "[" + std::to_string(k / p.value.cols()) + "," +
                             std::to_string(k % p.value.cols()) + "] fd=" + std::to_string(fd) +
                             " tape=" + std::to_string(g);
      }
    }
  }
  // Leave the gradients as the analytic ones for the caller.
  for (std::size_t pi = 0; pi < params.size(); ++pi) params[pi]->grad = analytic[pi];
  return report;
}

}  // namespace grafn
