/*
 * Copyright 2026 The pairlens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PAIRLENS_REGRESSION_H_
#define PAIRLENS_REGRESSION_H_

#include <cstddef>
#include <optional>
#include <span>

#include "pairlens/basis.h"
#include "pairlens/explanation.h"
#include "pairlens/mask.h"
#include "pairlens/sampler.h"

namespace pairlens {

struct FitOptions {
  // Above this condition estimate the Cholesky solve is replaced by a
  // minimum-norm eigen solve.
  double condition_limit = 1e10;
  // Gram eigenvalues below max_eigenvalue * rank_tolerance count as zero.
  double rank_tolerance = 1e-12;
  // Rows are split into this many contiguous partitions whose Gram matrices
  // are reduced in partition order, so results do not depend on `threads`.
  // 0 picks 4 partitions for bases up to 512 coefficients and 1 above.
  int partitions = 0;
  // Worker threads for Gram accumulation; 0 means hardware concurrency.
  int threads = 0;
};

// Weighted least-squares fit of an order-2 explanation. `values[k]` is the
// game value of `masks[k]`. Throws IllPosedFitError when the design does not
// determine every basis coefficient (the error carries the rank deficiency)
// and InvalidArgumentError on length or space mismatches.
Explanation Fit(std::span<const Mask> masks, std::span<const double> values,
                const BasisSpec& basis, const Kernel& kernel,
                const FitOptions& options = {});

inline Explanation Fit(const SampleBatch& batch,
                       std::span<const double> values, const BasisSpec& basis,
                       const Kernel& kernel, const FitOptions& options = {}) {
  return Fit(batch.masks, values, basis, kernel, options);
}

// Shapley kernel (n - 1) / (C(n, s) s (n - s)) for 0 < s < n. The empty and
// full masks have no finite weight and return nullopt: they enter fits as
// equality constraints. Throws InvalidArgumentError for s outside [0, n].
std::optional<double> ShapleyKernelWeight(int s, int n);

}  // namespace pairlens

#endif  // PAIRLENS_REGRESSION_H_
