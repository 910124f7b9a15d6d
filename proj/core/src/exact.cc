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

#include "pairlens/exact.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "pairlens/errors.h"

namespace pairlens {
namespace {

constexpr std::size_t kChunk = 1 << 14;

int Popcount(std::uint64_t x) { return std::popcount(x); }

// In place: out[S] = sum_{M superset of S} in[M].
void SupersetSums(std::vector<double>* table, int n) {
  auto& t = *table;
  for (int bit = 0; bit < n; ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t m = 0; m < t.size(); ++m) {
      if ((m & b) == 0) t[m] += t[m | b];
    }
  }
}

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int t = 1; t <= k; ++t) result = result * (n - k + t) / t;
  return result;
}

}  // namespace

double MaskProbability(int size, int n, double p) {
  return std::pow(p, size) * std::pow(1.0 - p, n - size);
}

MobiusTransform::MobiusTransform(const PlayerSpace& space,
                                 std::vector<double> coefficients)
    : space_(space), coefficients_(std::move(coefficients)) {
  space_.CheckEnumerable();
  if (coefficients_.size() != space_.num_masks()) {
    throw InvalidArgumentError("Moebius transform needs " +
                               std::to_string(space_.num_masks()) +
                               " coefficients");
  }
}

TabulatedGame MobiusTransform::Reconstruct() const {
  std::vector<double> values = coefficients_;
  for (int bit = 0; bit < space_.size(); ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t m = 0; m < values.size(); ++m) {
      if (m & b) values[m] += values[m ^ b];
    }
  }
  return TabulatedGame(space_, std::move(values));
}

double MobiusTransform::MaxAboveOrder(int order) const {
  double worst = 0.0;
  for (std::uint64_t m = 0; m < coefficients_.size(); ++m) {
    if (Popcount(m) > order) worst = std::max(worst, std::abs(coefficients_[m]));
  }
  return worst;
}

MobiusTransform ComputeMobius(const TabulatedGame& game) {
  std::vector<double> a = game.values();
  for (int bit = 0; bit < game.space().size(); ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t m = 0; m < a.size(); ++m) {
      if (m & b) a[m] -= a[m ^ b];
    }
  }
  return MobiusTransform(game.space(), std::move(a));
}

Explanation ExactExplanation::ToExplanation() const {
  FitDiagnostics diagnostics;
  diagnostics.sample_count = static_cast<std::size_t>(space.num_masks());
  diagnostics.distinct_masks = diagnostics.sample_count;
  diagnostics.rank = basis_size();
  diagnostics.solver = "exact";
  diagnostics.residual_mse = faithfulness;
  return Explanation(BasisSpec::Full(space), Kernel::WeightedBanzhaf(p),
                     coefficients, diagnostics, /*exact=*/true);
}

ExactExplanation ExactFaithfulInteractions(const TabulatedGame& game,
                                           double p) {
  CheckOpenUnitInterval(p);
  const PlayerSpace& space = game.space();
  space.CheckEnumerable();
  const int n = space.size();

  // Feature sets in basis layout: constant, singles, pairs (i < j).
  std::vector<std::uint64_t> features;
  features.push_back(0);
  for (int i = 0; i < n; ++i) features.push_back(std::uint64_t{1} << i);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      features.push_back((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
    }
  }
  const auto size = static_cast<Eigen::Index>(features.size());

  std::vector<double> weight_by_size(static_cast<std::size_t>(n) + 1);
  for (int s = 0; s <= n; ++s) {
    weight_by_size[static_cast<std::size_t>(s)] = MaskProbability(s, n, p);
  }
  // Superset weight mass of a set S depends on |S| only.
  std::vector<double> superset_weight(static_cast<std::size_t>(n) + 1, 0.0);
  for (int s = 0; s <= n; ++s) {
    for (int t = 0; t <= n - s; ++t) {
      superset_weight[static_cast<std::size_t>(s)] +=
          Binomial(n - s, t) * weight_by_size[static_cast<std::size_t>(s + t)];
    }
  }

  std::vector<double> weighted(game.values());
  double weighted_square = 0.0;
  for (std::uint64_t m = 0; m < weighted.size(); ++m) {
    const double w = weight_by_size[static_cast<std::size_t>(Popcount(m))];
    weighted_square += w * weighted[m] * weighted[m];
    weighted[m] *= w;
  }
  SupersetSums(&weighted, n);

  Eigen::MatrixXd gram(size, size);
  Eigen::VectorXd rhs(size);
  for (Eigen::Index a = 0; a < size; ++a) {
    const auto fa = features[static_cast<std::size_t>(a)];
    rhs(a) = weighted[fa];
    for (Eigen::Index b = 0; b <= a; ++b) {
      const auto fb = features[static_cast<std::size_t>(b)];
      const double g =
          superset_weight[static_cast<std::size_t>(Popcount(fa | fb))];
      gram(a, b) = g;
      gram(b, a) = g;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    // Every mask has positive weight, so the Gram matrix is positive definite.
    throw std::logic_error("exact normal equations are not positive definite");
  }
  const Eigen::VectorXd solution = llt.solve(rhs);

  TwoAdditiveGame coefficients(space);
  coefficients.set_constant(solution(0));
  for (int i = 0; i < n; ++i) coefficients.set_single(i, solution(i + 1));
  Eigen::Index index = n + 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      coefficients.set_pair(i, j, solution(index++));
    }
  }

  // F = sum w nu^2 - 2 e.r + e.G.e
  const double faithfulness = std::max(
      0.0, weighted_square - 2.0 * solution.dot(rhs) +
               solution.dot(gram * solution));
  return ExactExplanation{space, p, std::move(coefficients), faithfulness};
}

std::vector<double> ExactWeightedBanzhafValues(const TabulatedGame& game,
                                               double p) {
  CheckOpenUnitInterval(p);
  const auto mobius = ComputeMobius(game);
  const int n = game.space().size();
  std::vector<double> power(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 1; k <= n; ++k) {
    power[static_cast<std::size_t>(k)] =
        power[static_cast<std::size_t>(k) - 1] * p;
  }
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  for (std::uint64_t m = 1; m < mobius.coefficients().size(); ++m) {
    const double term =
        power[static_cast<std::size_t>(Popcount(m) - 1)] * mobius.at(m);
    for (std::uint64_t rest = m; rest != 0; rest &= rest - 1) {
      values[static_cast<std::size_t>(std::countr_zero(rest))] += term;
    }
  }
  return values;
}

double ExactPFaithfulness(const TabulatedGame& nu, const GameOracle& nu_hat,
                          double p) {
  CheckOpenUnitInterval(p);
  CheckSameSpace(nu.space(), nu_hat.space(), "p-faithfulness");
  const PlayerSpace& space = nu.space();
  const int n = space.size();
  double total = 0.0;
  std::vector<Mask> chunk;
  std::uint64_t first = 0;
  for (std::uint64_t m = 0; m < space.num_masks(); ++m) {
    chunk.push_back(Mask::FromIndex(space, m));
    if (chunk.size() == kChunk || m + 1 == space.num_masks()) {
      const auto approx = nu_hat.Evaluate(chunk);
      for (std::size_t k = 0; k < chunk.size(); ++k) {
        const std::uint64_t index = first + k;
        const double residual = nu.value(index) - approx[k];
        total += MaskProbability(Popcount(index), n, p) * residual * residual;
      }
      first = m + 1;
      chunk.clear();
    }
  }
  return total;
}

}  // namespace pairlens
