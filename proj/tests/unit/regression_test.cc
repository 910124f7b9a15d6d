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

#include "pairlens/regression.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "pairlens/errors.h"
#include "pairlens/exact.h"
#include "pairlens/random_game.h"
#include "pairlens/sampler.h"
#include "support/oracles.h"

namespace pairlens {
namespace {

std::vector<Mask> AllMasks(const PlayerSpace& space) {
  std::vector<Mask> masks;
  for (std::uint64_t k = 0; k < space.num_masks(); ++k) {
    masks.push_back(Mask::FromIndex(space, k));
  }
  return masks;
}

std::vector<std::uint64_t> Indices(const std::vector<Mask>& masks) {
  std::vector<std::uint64_t> out;
  for (const auto& m : masks) out.push_back(m.ToIndex());
  return out;
}

void ExpectBasisVectorNear(const Explanation& e, const Eigen::VectorXd& ref,
                           double tol) {
  const auto v = e.BasisVector();
  ASSERT_EQ(v.size(), static_cast<std::size_t>(ref.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    EXPECT_NEAR(v[k], ref(static_cast<Eigen::Index>(k)), tol) << "coefficient " << k;
  }
}

// Shapley values from the permutation-weighted definition.
std::vector<double> ShapleyByDefinition(const std::vector<double>& v, int n) {
  std::vector<double> phi(n, 0.0);
  std::vector<double> fact(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t s = 0; s < v.size(); ++s) {
      if (s & bit) continue;
      const int size = testing::Popcount(s);
      phi[i] += fact[size] * fact[n - size - 1] / fact[n] * (v[s | bit] - v[s]);
    }
  }
  return phi;
}

TEST(FitTest, EnumeratedExplicitWeightsReproduceExactFit) {
  PlayerSpace space(2, 2);
  const auto table = RandomTabulatedGame(space, 3);
  const auto masks = AllMasks(space);
  Kernel kernel = Kernel::WeightedBanzhaf(0.5);
  kernel.explicit_weights = true;
  const auto e = Fit(masks, table.values(), BasisSpec::Full(space), kernel);
  ExpectBasisVectorNear(e, testing::DenseExactFit(table.values(), 4, 0.5), 1e-8);
  const auto exact = ExactFaithfulInteractions(table, 0.5).ToExplanation();
  const auto a = e.BasisVector(), b = exact.BasisVector();
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
}

TEST(FitTest, RecoversTwoAdditiveGameFromSamples) {
  PlayerSpace space(4, 3);
  const auto game = RandomTwoAdditiveGame(space, 6);
  const auto batch = Sample(SamplePlan::Naive(space, 0.5, 400, 1));
  const auto e = Fit(batch, EvaluateBatch(game, batch), BasisSpec::Full(space),
                     Kernel::WeightedBanzhaf(0.5));
  for (int i = 0; i < space.size(); ++i) {
    EXPECT_NEAR(e.single(i), game.single(i), 1e-9);
    for (int j = i + 1; j < space.size(); ++j) EXPECT_NEAR(e.pair(i, j), game.pair(i, j), 1e-9);
  }
  EXPECT_LT(e.diagnostics().residual_mse, 1e-20);
}

TEST(FitTest, MatchesDenseQrOnRandomSamples) {
  PlayerSpace space(3, 3);
  const auto table = RandomTabulatedGame(space, 9);
  for (auto basis : {BasisSpec::Full(space), BasisSpec::CrossModal(space),
                     BasisSpec::FirstOrder(space), BasisSpec::Clique(space, {0, 2, 3, 5})}) {
    const auto batch = Sample(SamplePlan::Naive(space, 0.4, 300, 2));
    const auto values = EvaluateBatch(table, batch);
    const auto e = Fit(batch, values, basis, Kernel::WeightedBanzhaf(0.4));
    const std::vector<double> weights(batch.size(), 1.0);
    ExpectBasisVectorNear(
        e, testing::DenseWls(Indices(batch.masks), values, weights, 6, basis.pairs()), 1e-9);
  }
}

TEST(FitTest, ExplicitWeightsMatchDenseQr) {
  PlayerSpace space(3, 3);
  const auto table = RandomTabulatedGame(space, 10);
  const auto batch = Sample(SamplePlan::Naive(space, 0.5, 200, 3));
  const auto values = EvaluateBatch(table, batch);
  Kernel kernel = Kernel::WeightedBanzhaf(0.3);
  kernel.explicit_weights = true;
  std::vector<double> weights;
  for (const auto& m : batch.masks) weights.push_back(MaskProbability(m.count(), 6, 0.3));
  const auto basis = BasisSpec::Full(space);
  ExpectBasisVectorNear(Fit(batch, values, basis, kernel),
                        testing::DenseWls(Indices(batch.masks), values, weights, 6,
                                          basis.pairs()),
                        1e-8);
}

TEST(FitTest, SolutionIsLocallyOptimal) {
  PlayerSpace space(3, 2);
  const auto table = RandomTabulatedGame(space, 4);
  const auto batch = Sample(SamplePlan::Naive(space, 0.5, 150, 8));
  const auto values = EvaluateBatch(table, batch);
  const auto e = Fit(batch, values, BasisSpec::Full(space), Kernel::WeightedBanzhaf(0.5));
  auto loss = [&](const Explanation& x) {
    double s = 0;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const double r = values[k] - x.Value(batch.masks[k]);
      s += r * r;
    }
    return s;
  };
  const double best = loss(e);
  const auto coef = e.BasisVector();
  for (std::size_t k = 0; k < coef.size(); ++k) {
    auto moved = coef;
    moved[k] += 1e-4;
    EXPECT_GT(loss(Explanation::FromBasisVector(e.basis(), e.kernel(), moved)), best);
  }
}

TEST(FitTest, PermutationEquivariance) {
  // Reversing the image players of the game and of every mask reverses the
  // image coefficients.
  PlayerSpace space(4, 2);
  const auto table = RandomTabulatedGame(space, 5);
  auto perm = [](int k) { return k < 4 ? 3 - k : k; };
  std::vector<double> permuted_values(table.values().size());
  for (std::uint64_t m = 0; m < permuted_values.size(); ++m) {
    std::uint64_t pm = 0;
    for (int k = 0; k < 6; ++k) {
      if ((m >> k) & 1) pm |= std::uint64_t{1} << perm(k);
    }
    permuted_values[pm] = table.values()[m];
  }
  const TabulatedGame permuted(space, permuted_values);
  const auto batch = Sample(SamplePlan::Naive(space, 0.5, 200, 4));
  std::vector<Mask> permuted_masks;
  for (const auto& m : batch.masks) {
    Mask pm(space);
    for (int k : m.Members()) pm.set(perm(k));
    permuted_masks.push_back(pm);
  }
  const auto basis = BasisSpec::Full(space);
  const auto kernel = Kernel::WeightedBanzhaf(0.5);
  const auto a = Fit(batch.masks, EvaluateBatch(table, batch), basis, kernel);
  const auto b = Fit(permuted_masks, permuted.Evaluate(permuted_masks), basis, kernel);
  EXPECT_NEAR(a.constant(), b.constant(), 1e-10);
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(a.single(i), b.single(perm(i)), 1e-10);
    for (int j = i + 1; j < 6; ++j) EXPECT_NEAR(a.pair(i, j), b.pair(perm(i), perm(j)), 1e-10);
  }
}

TEST(FitTest, ThreadCountDoesNotChangeResult) {
  PlayerSpace space(6, 4);
  const auto table = RandomTabulatedGame(space, 2);
  const auto batch = Sample(SamplePlan::Naive(space, 0.5, 3000, 5));
  const auto values = EvaluateBatch(table, batch);
  FitOptions one, many;
  one.threads = 1;
  many.threads = 8;
  const auto a = Fit(batch, values, BasisSpec::Full(space), Kernel::WeightedBanzhaf(0.5), one);
  const auto b = Fit(batch, values, BasisSpec::Full(space), Kernel::WeightedBanzhaf(0.5), many);
  EXPECT_EQ(a.BasisVector(), b.BasisVector());
}

TEST(FitTest, TooFewDistinctMasksIsIllPosed) {
  PlayerSpace space(3, 3);  // full basis: 1 + 6 + 15 = 22 coefficients
  std::vector<Mask> masks;
  for (int rep = 0; rep < 10; ++rep) {
    for (std::uint64_t k = 0; k < 20; ++k) masks.push_back(Mask::FromIndex(space, k));
  }
  std::vector<double> values(masks.size(), 1.0);
  try {
    Fit(masks, values, BasisSpec::Full(space), Kernel::WeightedBanzhaf(0.5));
    FAIL() << "expected IllPosedFitError";
  } catch (const IllPosedFitError& e) {
    EXPECT_EQ(e.deficiency(), 2u);
  }
}

TEST(FitTest, RankDeficientDesignIsIllPosed) {
  // Player 0 is always active, so its single is confounded with the constant.
  PlayerSpace space(2, 2);
  std::vector<Mask> masks;
  for (std::uint64_t k = 0; k < 16; ++k) masks.push_back(Mask::FromIndex(space, k | 1));
  for (std::uint64_t k = 0; k < 16; ++k) masks.push_back(Mask::FromIndex(space, k | 1));
  std::vector<double> values(masks.size(), 0.5);
  EXPECT_THROW(Fit(masks, values, BasisSpec::FirstOrder(space), Kernel::WeightedBanzhaf(0.5)),
               IllPosedFitError);
}

TEST(FitTest, RejectsMismatchedInput) {
  PlayerSpace space(2, 2);
  std::vector<Mask> masks(3, Mask::Empty(space));
  std::vector<double> values(2, 0.0);
  EXPECT_THROW(Fit(masks, values, BasisSpec::FirstOrder(space), Kernel::WeightedBanzhaf(0.5)),
               InvalidArgumentError);
  std::vector<Mask> other(2, Mask::Empty(PlayerSpace(1, 3)));
  EXPECT_THROW(Fit(other, values, BasisSpec::FirstOrder(space), Kernel::WeightedBanzhaf(0.5)),
               InvalidMaskError);
}

TEST(ShapleyKernelTest, WeightsByFormula) {
  EXPECT_FALSE(ShapleyKernelWeight(0, 5).has_value());
  EXPECT_FALSE(ShapleyKernelWeight(5, 5).has_value());
  // (n-1) / (C(n,s) s (n-s)) at n=5, s=2: 4 / (10 * 2 * 3).
  EXPECT_DOUBLE_EQ(*ShapleyKernelWeight(2, 5), 4.0 / 60.0);
  EXPECT_DOUBLE_EQ(*ShapleyKernelWeight(1, 5), 4.0 / 20.0);
  EXPECT_THROW(ShapleyKernelWeight(6, 5), InvalidArgumentError);
}

TEST(ShapleyKernelTest, FirstOrderFitGivesShapleyValues) {
  PlayerSpace space(3, 3);
  const auto table = RandomTabulatedGame(space, 21);
  const auto masks = AllMasks(space);
  const auto e = Fit(masks, table.values(), BasisSpec::FirstOrder(space), Kernel::Shapley());
  const auto phi = ShapleyByDefinition(table.values(), 6);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(e.single(i), phi[i], 1e-10);
  EXPECT_NEAR(e.constant(), table.value(0), 1e-12);
  EXPECT_NEAR(e.Value(Mask::Full(space)), table.value(63), 1e-10);
  EXPECT_EQ(e.diagnostics().solver, "kkt");
}

TEST(ShapleyKernelTest, LargeBoundaryWeightApproachesConstrainedFit) {
  PlayerSpace space(3, 2);
  const auto table = RandomTabulatedGame(space, 22);
  const auto masks = AllMasks(space);
  Kernel soft = Kernel::Shapley();
  soft.shapley_boundary_weight = 1e6;
  const auto a = Fit(masks, table.values(), BasisSpec::Full(space), Kernel::Shapley());
  const auto b = Fit(masks, table.values(), BasisSpec::Full(space), soft);
  const auto va = a.BasisVector(), vb = b.BasisVector();
  for (std::size_t k = 0; k < va.size(); ++k) EXPECT_NEAR(va[k], vb[k], 1e-4);
}

TEST(ShapleyKernelTest, ConstraintsNeedBoundaryMasks) {
  PlayerSpace space(2, 2);
  std::vector<Mask> masks;
  std::vector<double> values;
  for (std::uint64_t k = 1; k < 15; ++k) {
    masks.push_back(Mask::FromIndex(space, k));
    values.push_back(0.1 * k);
  }
  EXPECT_THROW(Fit(masks, values, BasisSpec::FirstOrder(space), Kernel::Shapley()),
               InvalidArgumentError);
}

TEST(ShapleyKernelTest, ConversionIsUnsupported) {
  PlayerSpace space(2, 2);
  const auto table = RandomTabulatedGame(space, 1);
  const auto e = Fit(AllMasks(space), table.values(), BasisSpec::Full(space), Kernel::Shapley());
  EXPECT_THROW(FirstOrderConversion(e), UnsupportedError);
}

TEST(CliqueTest, ReferenceSplit) {
  EXPECT_EQ(SplitClique(PlayerSpace(196, 30), 72), (CliqueSplit{62, 10}));
}

TEST(CliqueTest, SplitAgreesWithFormula) {
  for (int ni : {10, 49, 196}) {
    for (int nt : {6, 12, 30}) {
      for (int k : {6, 10, 16}) {
        const int kt = std::min(
            nt, std::max(5, static_cast<int>(std::ceil(static_cast<double>(k) * nt / (ni + nt)))));
        EXPECT_EQ(SplitClique(PlayerSpace(ni, nt), k), (CliqueSplit{k - kt, kt}));
      }
    }
  }
  EXPECT_THROW(SplitClique(PlayerSpace(4, 4), 5), InvalidArgumentError);
  EXPECT_THROW(SplitClique(PlayerSpace(4, 4), 9), InvalidArgumentError);
}

TEST(CliqueTest, SplitClampsTextToModality) {
  EXPECT_EQ(SplitClique(PlayerSpace(6, 3), 9), (CliqueSplit{6, 3}));
}

TEST(CliqueTest, SelectionTakesLargestMagnitudesPerModality) {
  PlayerSpace space(6, 6);
  std::vector<double> attribution{0.1, -0.9, 0.3, 0.3, 0.0, 0.5,
                                  -2.0, 0.1, 0.2, 0.2, 0.3, 0.4};
  const auto basis = SelectClique(attribution, space, 6);  // split (1, 5)
  EXPECT_EQ(basis.clique_members(), (std::vector<int>{1, 6, 8, 9, 10, 11}));
  EXPECT_EQ(basis.pairs().size(), 15u);
  EXPECT_TRUE(basis.ContainsPair(1, 11));
  EXPECT_FALSE(basis.ContainsPair(0, 1));
  EXPECT_EQ(basis.Name(), "clique:6");
}

TEST(BasisTest, PairCounts) {
  PlayerSpace space(3, 4);
  EXPECT_EQ(BasisSpec::Full(space).pairs().size(), 21u);
  EXPECT_EQ(BasisSpec::CrossModal(space).pairs().size(), 12u);
  EXPECT_EQ(BasisSpec::FirstOrder(space).pairs().size(), 0u);
  EXPECT_EQ(BasisSpec::Full(space).size(), 1u + 7u + 21u);
  const auto cross = BasisSpec::CrossModal(space);
  for (auto [i, j] : cross.pairs()) {
    EXPECT_TRUE(space.is_image(i));
    EXPECT_TRUE(space.is_text(j));
  }
}

}  // namespace
}  // namespace pairlens
