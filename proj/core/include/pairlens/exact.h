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

// Enumeration-based ground truth: Moebius transforms, exact best order-2
// approximations under the p-weighted objective, weighted Banzhaf values and
// exact p-faithfulness. Everything here touches all 2^n masks and is limited
// to kEnumerationLimit players.

#ifndef PAIRLENS_EXACT_H_
#define PAIRLENS_EXACT_H_

#include <cstdint>
#include <vector>

#include "pairlens/explanation.h"
#include "pairlens/game.h"

namespace pairlens {

// a(M) = sum_{L subset of M} (-1)^{|M| - |L|} value(L), indexed by mask bits.
class MobiusTransform {
 public:
  MobiusTransform(const PlayerSpace& space, std::vector<double> coefficients);

  const PlayerSpace& space() const { return space_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double at(std::uint64_t index) const { return coefficients_[index]; }

  // value(M) = sum_{L subset of M} a(L).
  TabulatedGame Reconstruct() const;
  // Largest |a(M)| over masks with more than `order` members.
  double MaxAboveOrder(int order) const;

 private:
  PlayerSpace space_;
  std::vector<double> coefficients_;
};

MobiusTransform ComputeMobius(const TabulatedGame& game);

// P_p(M) = p^|M| (1-p)^(n-|M|).
double MaskProbability(int size, int n, double p);

// Exact minimizer of sum_M P_p(M) (game(M) - surrogate(M))^2 over all
// explanations with the full order-2 basis. Solved through the normal
// equations with explicit per-mask weights; the Gram matrix entries are
// superset sums of the weights and the right-hand side is the superset-sum
// transform of weight * value.
struct ExactExplanation {
  PlayerSpace space;
  double p;
  TwoAdditiveGame coefficients;
  // p-faithfulness of the surrogate against the source game.
  double faithfulness;

  std::size_t basis_size() const {
    const auto n = static_cast<std::size_t>(space.size());
    return 1 + n + n * (n - 1) / 2;
  }
  Explanation ToExplanation() const;
};

ExactExplanation ExactFaithfulInteractions(const TabulatedGame& game,
                                           double p);

// phi_i = sum_{M containing i} p^{|M| - 1} a(M).
std::vector<double> ExactWeightedBanzhafValues(const TabulatedGame& game,
                                               double p);

// sum_M P_p(M) (nu(M) - nu_hat(M))^2 by enumeration.
double ExactPFaithfulness(const TabulatedGame& nu, const GameOracle& nu_hat,
                          double p);

}  // namespace pairlens

#endif  // PAIRLENS_EXACT_H_
