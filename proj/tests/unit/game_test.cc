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

#include "pairlens/game.h"

#include <cmath>
#include <thread>

#include <gtest/gtest.h>

#include "pairlens/errors.h"
#include "pairlens/exact.h"
#include "pairlens/random_game.h"
#include "support/oracles.h"

namespace pairlens {
namespace {

TEST(TwoAdditiveGameTest, HandComputedValues) {
  PlayerSpace space(2, 1);
  TwoAdditiveGame g(space);
  g.set_constant(1.0);
  g.set_single(0, 2.0);
  g.set_single(1, -1.0);
  g.set_single(2, 0.5);
  g.set_pair(2, 0, 3.0);  // stored as (0, 2)
  EXPECT_DOUBLE_EQ(g.Evaluate(Mask::Empty(space)), 1.0);
  EXPECT_DOUBLE_EQ(g.Evaluate(Mask::FromBitstring(space, "100")), 3.0);
  EXPECT_DOUBLE_EQ(g.Evaluate(Mask::FromBitstring(space, "101")), 6.5);
  EXPECT_DOUBLE_EQ(g.Evaluate(Mask::FromBitstring(space, "111")), 5.5);
  EXPECT_DOUBLE_EQ(g.pair(0, 2), 3.0);
  EXPECT_DOUBLE_EQ(g.pair(0, 1), 0.0);
  ASSERT_EQ(g.pairs().size(), 1u);
  EXPECT_EQ(g.pairs()[0], (PairTerm{0, 2, 3.0}));
}

TEST(TwoAdditiveGameTest, RejectsBadPairs) {
  TwoAdditiveGame g(PlayerSpace(2, 2));
  EXPECT_THROW(g.set_pair(1, 1, 1.0), InvalidArgumentError);
  EXPECT_THROW(g.set_pair(0, 4, 1.0), InvalidArgumentError);
}

TEST(TwoAdditiveGameTest, PairMatrixIsSymmetric) {
  const auto g = RandomTwoAdditiveGame(PlayerSpace(3, 3), 4);
  const auto m = g.PairMatrix();
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(m[i * 6 + i], 0.0);
    for (int j = 0; j < 6; ++j) {
      if (i != j) {
        EXPECT_EQ(m[i * 6 + j], g.pair(i, j));
      }
      EXPECT_EQ(m[i * 6 + j], m[j * 6 + i]);
    }
  }
}

TEST(TwoAdditiveGameTest, SecondDiscreteDerivativeRecoversPair) {
  // v(S+i+j) - v(S+i) - v(S+j) + v(S) = e_ij for any S without i, j.
  PlayerSpace space(3, 3);
  const auto g = RandomTwoAdditiveGame(space, 8);
  Mask s = Mask::FromMembers(space, {1, 4});
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 2}, {0, 5}, {2, 3}}) {
    Mask si = s, sj = s, sij = s;
    si.set(i);
    sj.set(j);
    sij.set(i);
    sij.set(j);
    EXPECT_NEAR(g.Evaluate(sij) - g.Evaluate(si) - g.Evaluate(sj) + g.Evaluate(s),
                g.pair(i, j), 1e-12);
  }
}

TEST(TabulatedGameTest, ValidatesConstruction) {
  PlayerSpace space(1, 2);
  EXPECT_THROW(TabulatedGame(space, std::vector<double>(7, 0.0)),
               InvalidArgumentError);
  std::vector<double> bad(8, 0.0);
  bad[3] = std::nan("");
  EXPECT_THROW(TabulatedGame(space, bad), InvalidArgumentError);
  EXPECT_THROW(TabulatedGame(PlayerSpace(13, 12), {}), SpaceTooLargeError);
}

TEST(TabulatedGameTest, TabulateMatchesSourceEverywhere) {
  PlayerSpace space(3, 4);
  const auto src = RandomTwoAdditiveGame(space, 1);
  const auto table = TabulatedGame::Tabulate(src);
  for (std::uint64_t i = 0; i < space.num_masks(); ++i) {
    EXPECT_EQ(table.value(i), src.Evaluate(Mask::FromIndex(space, i)));
  }
  EXPECT_EQ(table.Evaluate(Mask::FromIndex(space, 77)), table.value(77));
}

TEST(TabulatedGameTest, RejectsMasksOfOtherSpaces) {
  const auto g = RandomTabulatedGame(PlayerSpace(2, 2), 1);
  EXPECT_THROW(g.Evaluate(Mask::Empty(PlayerSpace(3, 1))), InvalidMaskError);
}

TEST(RandomGameTest, SeedsAreReproducibleAndDistinct) {
  PlayerSpace space(3, 3);
  EXPECT_EQ(RandomTabulatedGame(space, 5).values(),
            RandomTabulatedGame(space, 5).values());
  EXPECT_NE(RandomTabulatedGame(space, 5).values(),
            RandomTabulatedGame(space, 6).values());
  const auto a = RandomTwoAdditiveGame(space, 5);
  const auto b = RandomTwoAdditiveGame(space, 5);
  EXPECT_EQ(a.pairs(), b.pairs());
  EXPECT_EQ(a.pairs().size(), 15u);
  for (const auto& t : a.pairs()) {
    EXPECT_LE(std::abs(t.value), 1.0);
  }
}

TEST(RandomGameTest, TwoAdditiveHasNoHigherOrderMobius) {
  PlayerSpace space(4, 4);
  const auto g = TabulatedGame::Tabulate(RandomTwoAdditiveGame(space, 2));
  const auto a = testing::BruteMobius(g.values(), space.size());
  for (std::uint64_t m = 0; m < a.size(); ++m) {
    if (testing::Popcount(m) > 2) {
      EXPECT_NEAR(a[m], 0.0, 1e-12);
    }
  }
}

TEST(RandomGameTest, KindNamesRoundTrip) {
  for (auto kind : {GameKind::kTabulated, GameKind::kTwoAdditive, GameKind::kFactored}) {
    EXPECT_EQ(ParseGameKind(GameKindName(kind)), kind);
  }
  EXPECT_THROW(ParseGameKind("bogus"), InvalidArgumentError);
}

TEST(FactoredGameTest, ProductMatchesPointwiseEvaluation) {
  PlayerSpace space(4, 3);
  const auto g = RandomFactoredGame(space, 9);
  std::vector<Mask> image, text;
  for (std::uint64_t k = 0; k < 16; k += 3) image.push_back(Mask::FromIndex(space, k));
  for (std::uint64_t k = 0; k < 8; ++k) text.push_back(Mask::FromIndex(space, k << 4));
  const auto product = g.EvaluateProduct(image, text);
  ASSERT_EQ(product.size(), image.size() * text.size());
  for (std::size_t a = 0; a < image.size(); ++a) {
    for (std::size_t b = 0; b < text.size(); ++b) {
      EXPECT_NEAR(product[a * text.size() + b], g.Evaluate(image[a] | text[b]), 1e-12);
    }
  }
}

TEST(FactoredGameTest, CountsSideEncodings) {
  PlayerSpace space(4, 3);
  const auto g = RandomFactoredGame(space, 9);
  std::vector<Mask> image(5, Mask::Empty(space)), text(7, Mask::Empty(space));
  g.ResetCounters();
  g.EvaluateProduct(image, text);
  EXPECT_EQ(g.image_encodings(), 5u);
  EXPECT_EQ(g.text_encodings(), 7u);
  g.ResetCounters();
  std::vector<Mask> joint(35, Mask::Full(space));
  g.Evaluate(joint);
  EXPECT_EQ(g.side_encodings(), 70u);
}

TEST(FactoredGameTest, ValueIsScaledCosine) {
  const auto g = RandomFactoredGame(PlayerSpace(3, 3), 2);
  for (std::uint64_t k = 0; k < 64; ++k) {
    const double v = g.Evaluate(Mask::FromIndex(g.space(), k));
    EXPECT_LE(std::abs(v), g.logit_scale() + 1e-12);
  }
}

TEST(FactoredGameTest, ProductRejectsMixedSides) {
  PlayerSpace space(2, 2);
  const auto g = RandomFactoredGame(space, 1);
  std::vector<Mask> image{Mask::Full(space)}, text{Mask::Empty(space)};
  EXPECT_THROW(g.EvaluateProduct(image, text), InvalidMaskError);
}

TEST(MemoizedOracleTest, QueriesInnerOncePerDistinctMask) {
  PlayerSpace space(2, 2);
  const auto g = RandomTabulatedGame(space, 3);
  MemoizedOracle memo(g);
  std::vector<Mask> masks;
  for (int rep = 0; rep < 3; ++rep) {
    for (std::uint64_t k = 0; k < 16; ++k) masks.push_back(Mask::FromIndex(space, k));
  }
  const auto values = memo.Evaluate(masks);
  for (std::size_t k = 0; k < masks.size(); ++k) {
    EXPECT_EQ(values[k], g.value(k % 16));
  }
  EXPECT_EQ(memo.cache_size(), 16u);
  EXPECT_EQ(memo.inner_queries(), 16u);
  memo.Evaluate(masks);
  EXPECT_EQ(memo.inner_queries(), 16u);
}

TEST(MemoizedOracleTest, ConcurrentCallersSeeConsistentValues) {
  PlayerSpace space(3, 3);
  const auto g = RandomTabulatedGame(space, 3);
  MemoizedOracle memo(g);
  std::vector<std::thread> workers;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      for (std::uint64_t k = 0; k < 64; ++k) {
        const auto idx = (k * (t + 1)) % 64;
        if (memo.Evaluate(Mask::FromIndex(space, idx)) != g.value(idx)) ++mismatches;
      }
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(mismatches.load(), 0);
  EXPECT_EQ(memo.cache_size(), 64u);
}

TEST(MobiusTest, MatchesSubsetSumOracleAndReconstructs) {
  PlayerSpace space(3, 4);
  const auto g = RandomTabulatedGame(space, 12);
  const auto mobius = ComputeMobius(g);
  const auto brute = testing::BruteMobius(g.values(), space.size());
  for (std::size_t m = 0; m < brute.size(); ++m) {
    EXPECT_NEAR(mobius.at(m), brute[m], 1e-12);
  }
  const auto back = mobius.Reconstruct();
  for (std::size_t m = 0; m < brute.size(); ++m) {
    EXPECT_NEAR(back.value(m), g.value(m), 1e-12);
  }
  EXPECT_GT(mobius.MaxAboveOrder(2), 0.0);
}

}  // namespace
}  // namespace pairlens
