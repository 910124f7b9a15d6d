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

#include "pairlens/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "pairlens/errors.h"
#include "pairlens/exact.h"
#include "pairlens/random_game.h"

namespace pairlens {
namespace {

class CountingOracle final : public GameOracle {
 public:
  explicit CountingOracle(const GameOracle& inner) : inner_(inner) {}
  const PlayerSpace& space() const override { return inner_.space(); }
  int calls() const { return calls_; }
  std::size_t masks() const { return masks_; }

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override {
    ++calls_;
    masks_ += masks.size();
    return inner_.Evaluate(masks);
  }

 private:
  const GameOracle& inner_;
  mutable int calls_ = 0;
  mutable std::size_t masks_ = 0;
};

Explanation RandomExplanation(const PlayerSpace& space, std::uint64_t seed,
                              bool interactions) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TwoAdditiveGame g(space);
  g.set_constant(u(rng));
  for (int i = 0; i < space.size(); ++i) g.set_single(i, u(rng));
  if (interactions) {
    for (int i = 0; i < space.size(); ++i) {
      for (int j = i + 1; j < space.size(); ++j) g.set_pair(i, j, u(rng));
    }
  }
  const BasisSpec basis = interactions ? BasisSpec::Full(space) : BasisSpec::FirstOrder(space);
  return Explanation(basis, Kernel::WeightedBanzhaf(0.5), g);
}

// Average ranks (1-based) with ties sharing their mean position.
std::vector<double> AverageRanks(const std::vector<double>& x) {
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double y : x) {
      less += y < x[i];
      equal += y == x[i];
    }
    ranks[i] = less + (equal + 1) / 2;
  }
  return ranks;
}

double Pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(SpearmanTest, MonotoneTransformsAreOne) {
  std::vector<double> x{0.3, -1.0, 2.0, 5.0, 0.1};
  std::vector<double> y;
  for (double v : x) y.push_back(std::exp(v));
  EXPECT_DOUBLE_EQ(SpearmanCorrelation(x, y), 1.0);
  for (double& v : y) v = -v;
  EXPECT_DOUBLE_EQ(SpearmanCorrelation(x, y), -1.0);
}

TEST(SpearmanTest, TiesUseAverageRanks) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x, y;
    for (int k = 0; k < 30; ++k) {
      x.push_back(static_cast<double>(rng() % 5));
      y.push_back(static_cast<double>(rng() % 7));
    }
    EXPECT_NEAR(SpearmanCorrelation(x, y), Pearson(AverageRanks(x), AverageRanks(y)), 1e-12);
  }
}

TEST(SpearmanTest, UndefinedCases) {
  std::vector<double> one{1.0}, flat{2.0, 2.0, 2.0}, ramp{1.0, 2.0, 3.0};
  EXPECT_THROW(SpearmanCorrelation(one, one), UndefinedMetricError);
  EXPECT_THROW(SpearmanCorrelation(flat, ramp), UndefinedMetricError);
  EXPECT_THROW(SpearmanCorrelation(ramp, one), InvalidArgumentError);
}

TEST(FaithfulnessCorrelationTest, SelfCorrelationIsOne) {
  PlayerSpace space(3, 3);
  const auto e = RandomExplanation(space, 2, true);
  EXPECT_DOUBLE_EQ(FaithfulnessCorrelation(e, e, 0.5, 200, 1), 1.0);
}

TEST(FaithfulnessCorrelationTest, InteractionsHelpOnInteractingGame) {
  PlayerSpace space(3, 2);
  // Pure pairwise synergy: value is 1 only when players 0 and 3 are together.
  std::vector<double> values(32, 0.0);
  for (std::uint64_t m = 0; m < 32; ++m) {
    values[m] = ((m & 1) && (m & 8)) ? 1.0 : 0.0;
    values[m] += 0.01 * static_cast<double>(std::popcount(m));
  }
  const TabulatedGame game(space, values);
  const auto e = ExactFaithfulInteractions(game, 0.5).ToExplanation();
  EXPECT_GT(FaithfulnessCorrelation(e, game, 0.5, 2000, 3),
            FaithfulnessCorrelation(e.WithoutInteractions(), game, 0.5, 2000, 3));
}

// Best surrogate value over all subsets of size k, by enumeration.
double BruteExtremum(const Explanation& e, int k, Extremum which) {
  const PlayerSpace& space = e.space();
  double best = which == Extremum::kMax ? -INFINITY : INFINITY;
  for (std::uint64_t m = 0; m < space.num_masks(); ++m) {
    if (std::popcount(m) != k) continue;
    const double v = e.Value(Mask::FromIndex(space, m));
    best = which == Extremum::kMax ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

TEST(GreedyTest, ExactForSizesUpToTwo) {
  PlayerSpace space(5, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto e = RandomExplanation(space, seed, true);
    for (auto which : {Extremum::kMax, Extremum::kMin}) {
      const auto subsets = GreedyExtremalSubsets(e, which);
      ASSERT_EQ(subsets.masks.size(), 10u);
      EXPECT_TRUE(subsets.masks[0].empty());
      EXPECT_EQ(subsets.masks[9], Mask::Full(space));
      for (int k = 0; k <= 9; ++k) {
        EXPECT_EQ(subsets.masks[k].count(), k);
        EXPECT_DOUBLE_EQ(subsets.surrogate_values[k], e.Value(subsets.masks[k]));
      }
      for (int k = 1; k <= 2; ++k) {
        EXPECT_NEAR(subsets.surrogate_values[k], BruteExtremum(e, k, which), 1e-12);
      }
      for (int k = 3; k < 9; ++k) {
        if (which == Extremum::kMax) {
          EXPECT_LE(subsets.surrogate_values[k], BruteExtremum(e, k, which) + 1e-12);
        } else {
          EXPECT_GE(subsets.surrogate_values[k], BruteExtremum(e, k, which) - 1e-12);
        }
      }
    }
  }
}

TEST(GreedyTest, AdditiveExplanationsFollowTheRanking) {
  PlayerSpace space(7, 5);
  const auto e = RandomExplanation(space, 17, false);
  std::vector<int> order(12);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return e.single(a) > e.single(b); });
  const auto max = GreedyExtremalSubsets(e, Extremum::kMax);
  const auto min = GreedyExtremalSubsets(e, Extremum::kMin);
  Mask top(space);
  for (int k = 1; k <= 12; ++k) {
    top.set(order[k - 1]);
    EXPECT_EQ(max.masks[k], top);
    EXPECT_EQ(min.masks[12 - k], top.Complement());
  }
}

TEST(GreedyTest, ThreadCountDoesNotChangeResult) {
  PlayerSpace space(20, 10);
  const auto e = RandomExplanation(space, 3, true);
  GreedyOptions one, many;
  one.threads = 1;
  many.threads = 6;
  EXPECT_EQ(GreedyExtremalSubsets(e, Extremum::kMax, one).masks,
            GreedyExtremalSubsets(e, Extremum::kMax, many).masks);
}

TEST(GreedyTest, StrideAppliesAboveSeedingLimit) {
  PlayerSpace space(8, 4);
  const auto e = RandomExplanation(space, 6, true);
  GreedyOptions strided;
  strided.full_seeding_limit = 4;
  strided.seed_stride = 3;
  const auto full = GreedyExtremalSubsets(e, Extremum::kMax);
  const auto partial = GreedyExtremalSubsets(e, Extremum::kMax, strided);
  for (int k = 0; k <= 12; ++k) {
    EXPECT_LE(partial.surrogate_values[k], full.surrogate_values[k] + 1e-12);
  }
}

TEST(CurvesTest, SingleBatchedOracleCall) {
  PlayerSpace space(4, 3);
  const auto game = RandomTabulatedGame(space, 1);
  const auto e = ExactFaithfulInteractions(game, 0.5).ToExplanation();
  CountingOracle counting(game);
  InsertionDeletionCurves(e, counting);
  EXPECT_EQ(counting.calls(), 1);
  EXPECT_EQ(counting.masks(), 2u * 7 + 2);
}

TEST(CurvesTest, AidIsSumOfCurveDifferences) {
  PlayerSpace space(4, 4);
  const auto game = RandomTabulatedGame(space, 2);
  const auto e = ExactFaithfulInteractions(game, 0.5).ToExplanation();
  const auto curves = InsertionDeletionCurves(e, game);
  const auto max = GreedyExtremalSubsets(e, Extremum::kMax);
  const auto min = GreedyExtremalSubsets(e, Extremum::kMin);
  double aid = 0.0;
  for (int k = 1; k <= 8; ++k) {
    EXPECT_EQ(curves.insertion[k - 1], game.Evaluate(max.masks[k]));
    EXPECT_EQ(curves.deletion[k - 1], game.Evaluate(min.masks[8 - k]));
    aid += game.Evaluate(max.masks[k]) - game.Evaluate(min.masks[k]);
  }
  EXPECT_NEAR(curves.aid, aid, 1e-12);
  EXPECT_EQ(curves.empty_value, game.value(0));
  EXPECT_EQ(curves.full_value, game.value(255));
}

TEST(CurvesTest, SelfEvaluationOfAdditiveExplanationIsPrefixSums) {
  PlayerSpace space(5, 3);
  const auto e = RandomExplanation(space, 8, false);
  std::vector<double> s;
  for (int i = 0; i < 8; ++i) s.push_back(e.single(i));
  std::sort(s.begin(), s.end(), std::greater<>());
  double expected = 0.0;
  for (int k = 1; k <= 8; ++k) {
    expected += std::accumulate(s.begin(), s.begin() + k, 0.0) -
                std::accumulate(s.end() - k, s.end(), 0.0);
  }
  EXPECT_NEAR(InsertionDeletionCurves(e, e).aid, expected, 1e-12);
}

TEST(CurvesTest, NegatedExplanationNegatesAid) {
  PlayerSpace space(4, 4);
  const auto game = RandomTabulatedGame(space, 5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto e = RandomExplanation(space, seed, true);
    EXPECT_NEAR(InsertionDeletionCurves(e.Scaled(-1.0), game).aid,
                -InsertionDeletionCurves(e, game).aid, 1e-12);
  }
}

TEST(CurvesTest, GridAnchorsAndNormalization) {
  PlayerSpace space(3, 2);
  const auto game = RandomTabulatedGame(space, 3);
  const auto e = ExactFaithfulInteractions(game, 0.5).ToExplanation();
  const auto c = InsertionDeletionCurves(e, game);
  ASSERT_EQ(c.grid.size(), static_cast<std::size_t>(kCurveGridPoints));
  EXPECT_EQ(c.grid.front(), 0.0);
  EXPECT_EQ(c.grid.back(), 1.0);
  EXPECT_EQ(c.insertion_raw.front(), c.empty_value);
  EXPECT_EQ(c.insertion_raw.back(), c.full_value);
  EXPECT_EQ(c.deletion_raw.front(), c.full_value);
  EXPECT_EQ(c.deletion_raw.back(), c.empty_value);
  // Fraction 0.4 of 5 tokens is exactly k = 2.
  EXPECT_NEAR(c.insertion_raw[20], c.insertion[1], 1e-12);
  const auto& norm = c.RequireInsertionNorm();
  EXPECT_NEAR(norm.front(), 0.0, 1e-15);
  EXPECT_NEAR(norm.back(), 1.0, 1e-12);
  for (std::size_t j = 0; j < norm.size(); ++j) {
    EXPECT_NEAR(norm[j], (c.insertion_raw[j] - c.empty_value) / (c.full_value - c.empty_value),
                1e-12);
  }
}

TEST(CurvesTest, DegenerateNormalizationIsReported) {
  PlayerSpace space(2, 2);
  std::vector<double> values(16, 0.0);
  values[3] = 1.0;  // nu(empty) == nu(full) == 0
  const TabulatedGame game(space, values);
  const auto e = ExactFaithfulInteractions(game, 0.5).ToExplanation();
  const auto c = InsertionDeletionCurves(e, game);
  EXPECT_FALSE(c.insertion_norm.has_value());
  EXPECT_FALSE(c.normalization_error.empty());
  EXPECT_THROW(c.RequireInsertionNorm(), NormalizationDegenerateError);
  EXPECT_THROW(c.RequireDeletionNorm(), NormalizationDegenerateError);

  std::stringstream csv;
  WriteCurvesCsv(c, csv);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "# pairlens-curves v1");
  std::getline(csv, line);
  EXPECT_EQ(line, "fraction,insertion_raw,deletion_raw,insertion_norm,deletion_norm");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.size() - 2), ",,");
  }
  EXPECT_EQ(rows, kCurveGridPoints);
}

TEST(CurvesTest, CsvRoundTripsValues) {
  PlayerSpace space(3, 3);
  const auto game = RandomTabulatedGame(space, 4);
  const auto e = ExactFaithfulInteractions(game, 0.5).ToExplanation();
  const auto c = InsertionDeletionCurves(e, game);
  std::stringstream csv;
  WriteCurvesCsv(c, csv);
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  for (int j = 0; j < kCurveGridPoints; ++j) {
    ASSERT_TRUE(std::getline(csv, line));
    std::stringstream fields(line);
    std::string cell;
    std::vector<double> parsed;
    while (std::getline(fields, cell, ',')) parsed.push_back(std::stod(cell));
    ASSERT_EQ(parsed.size(), 5u);
    EXPECT_EQ(parsed[0], c.grid[j]);
    EXPECT_EQ(parsed[1], c.insertion_raw[j]);
    EXPECT_EQ(parsed[2], c.deletion_raw[j]);
    EXPECT_EQ(parsed[3], (*c.insertion_norm)[j]);
    EXPECT_EQ(parsed[4], (*c.deletion_norm)[j]);
  }
}

TEST(InterpolationTest, PiecewiseLinear) {
  std::vector<double> xs{0.0, 1.0, 3.0}, ys{1.0, 3.0, -1.0}, at{0.0, 0.5, 1.0, 2.0, 3.0};
  const auto out = InterpolateLinear(xs, ys, at);
  EXPECT_EQ(out, (std::vector<double>{1.0, 2.0, 3.0, 1.0, -1.0}));
}

}  // namespace
}  // namespace pairlens
