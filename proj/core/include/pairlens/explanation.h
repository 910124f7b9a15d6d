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

#ifndef PAIRLENS_EXPLANATION_H_
#define PAIRLENS_EXPLANATION_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pairlens/basis.h"
#include "pairlens/game.h"

namespace pairlens {

enum class KernelType { kWeightedBanzhaf, kShapley };

// How masks are weighted in the least-squares objective.
//
// Weighted Banzhaf(p): masks drawn from the product-Bernoulli(p) distribution
// carry uniform row weights, so the sample mean already estimates the
// p-weighted objective. With `explicit_weights` each row is instead weighted
// by p^|M| (1-p)^(n-|M|), which is the right choice for uniformly drawn or
// fully enumerated batches.
//
// Shapley: interior masks carry (n-1) / (C(n,s) s (n-s)); the empty and full
// masks are equality constraints unless `shapley_boundary_weight` is set, in
// which case they become ordinary rows with that (large) weight.
struct Kernel {
  KernelType type = KernelType::kWeightedBanzhaf;
  double p = 0.5;
  bool explicit_weights = false;
  double shapley_boundary_weight = 0.0;

  static Kernel WeightedBanzhaf(double p) {
    return Kernel{KernelType::kWeightedBanzhaf, p, false, 0.0};
  }
  static Kernel Shapley() { return Kernel{KernelType::kShapley, 0.5, false, 0.0}; }

  // "wbanzhaf" or "shapley".
  std::string_view Name() const;
};

Kernel ParseKernel(std::string_view name, double p);

struct FitDiagnostics {
  double residual_mse = 0.0;
  double condition_estimate = 1.0;
  std::size_t sample_count = 0;
  std::size_t distinct_masks = 0;
  std::size_t rank = 0;
  // "cholesky", "min-norm", "kkt" or "exact".
  std::string solver;
};

// A fitted order-2 explanation: a two-additive surrogate over a basis, plus
// the kernel it was fitted under. Pairs absent from the stored coefficients
// are zero; every stored pair belongs to the basis.
class Explanation final : public GameOracle {
 public:
  // Throws InvalidArgumentError when a coefficient pair is not in `basis` or
  // the spaces differ.
  Explanation(BasisSpec basis, Kernel kernel, TwoAdditiveGame coefficients,
              FitDiagnostics diagnostics = {}, bool exact = false);

  const PlayerSpace& space() const override { return basis_.space(); }
  const BasisSpec& basis() const { return basis_; }
  const Kernel& kernel() const { return kernel_; }
  const TwoAdditiveGame& coefficients() const { return coefficients_; }
  const FitDiagnostics& diagnostics() const { return diagnostics_; }
  bool exact() const { return exact_; }

  double constant() const { return coefficients_.constant(); }
  double single(int player) const { return coefficients_.single(player); }
  double pair(int i, int j) const { return coefficients_.pair(i, j); }

  double Value(const Mask& mask) const { return coefficients_.Value(mask); }

  // Coefficients in basis layout (see BasisSpec).
  std::vector<double> BasisVector() const;
  static Explanation FromBasisVector(BasisSpec basis, Kernel kernel,
                                     const std::vector<double>& values,
                                     FitDiagnostics diagnostics = {});

  // Same constant and singles, no pairs, first-order basis.
  Explanation WithoutInteractions() const;
  // Every coefficient multiplied by `factor`.
  Explanation Scaled(double factor) const;

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override;

 private:
  BasisSpec basis_;
  Kernel kernel_;
  TwoAdditiveGame coefficients_;
  FitDiagnostics diagnostics_;
  bool exact_;
};

// Per-token attributions e_i + p * sum_{j != i} e_{i,j}: the weighted Banzhaf
// values of the surrogate. Throws UnsupportedError for Shapley-kernel fits.
std::vector<double> FirstOrderConversion(const Explanation& explanation);

}  // namespace pairlens

#endif  // PAIRLENS_EXPLANATION_H_
