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

#ifndef PAIRLENS_EVALUATION_H_
#define PAIRLENS_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pairlens/explanation.h"
#include "pairlens/game.h"
#include "pairlens/mask.h"

namespace pairlens {

// ---------------------------------------------------------------------------
// Rank correlation

// Spearman correlation with average ranks for ties. Throws
// UndefinedMetricError when fewer than two points are given or either side
// has zero rank variance.
double SpearmanCorrelation(std::span<const double> x, std::span<const double> y);

// Spearman correlation between `explanation` and `nu` on `m` masks drawn
// i.i.d. with inclusion probability `p` (naive sampler, seed `seed`).
double FaithfulnessCorrelation(const GameOracle& explanation,
                               const GameOracle& nu, double p, std::uint64_t m,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Extremal subsets

enum class Extremum { kMax, kMin };

struct GreedyOptions {
  // Every token seeds a greedy run while n <= this limit; above it only
  // every `seed_stride`-th token does.
  int full_seeding_limit = 120;
  int seed_stride = 2;
  // Seeds run on this many threads (0: hardware concurrency); the per-size
  // reduction is in seed order, so results do not depend on it.
  int threads = 0;
};

// masks[k] is the size-k subset with the largest (kMax) or smallest (kMin)
// surrogate value found, for k = 0..n. A run is seeded with a single token
// and repeatedly adds the token with the best marginal surrogate gain
// (lowest index on ties); for each size, the best run wins, with earlier
// seeds kept on ties.
struct ExtremalSubsets {
  Extremum extremum;
  std::vector<Mask> masks;
  std::vector<double> surrogate_values;
};

ExtremalSubsets GreedyExtremalSubsets(const Explanation& explanation,
                                      Extremum extremum,
                                      const GreedyOptions& options = {});

// ---------------------------------------------------------------------------
// Insertion / deletion curves

inline constexpr int kCurveGridPoints = 51;

struct Curves {
  int n = 0;
  double empty_value = 0.0;  // nu(empty)
  double full_value = 0.0;   // nu(full)
  // Index k - 1 holds the value for k = 1..n:
  //   insertion[k-1] = nu(M_max of size k)
  //   deletion[k-1]  = nu(M_min of size n - k)
  std::vector<double> insertion;
  std::vector<double> deletion;
  // sum_{k=1..n} nu(M_max,k) - nu(M_min,k)
  double aid = 0.0;
  // Linear interpolation on fractions j / 50, j = 0..50. The k = 0 anchor is
  // nu(empty) for insertion and nu(full) for deletion.
  std::vector<double> grid;
  std::vector<double> insertion_raw;
  std::vector<double> deletion_raw;
  // (v - nu(empty)) / (nu(full) - nu(empty)); absent when the denominator is
  // zero, in which case `normalization_error` says why.
  std::optional<std::vector<double>> insertion_norm;
  std::optional<std::vector<double>> deletion_norm;
  std::string normalization_error;

  // Normalized grids, or NormalizationDegenerateError.
  const std::vector<double>& RequireInsertionNorm() const;
  const std::vector<double>& RequireDeletionNorm() const;
};

// One batched oracle call of 2n + 2 masks.
Curves InsertionDeletionCurves(const Explanation& explanation,
                               const GameOracle& nu,
                               const GreedyOptions& options = {});

// Piecewise-linear interpolation of (xs, ys) at `at`; xs must be increasing.
std::vector<double> InterpolateLinear(std::span<const double> xs,
                                      std::span<const double> ys,
                                      std::span<const double> at);

inline constexpr int kCurvesCsvVersion = 1;

// Columns: fraction, insertion_raw, deletion_raw, insertion_norm,
// deletion_norm (blank when degenerate), after a "# pairlens-curves v1" line.
void WriteCurvesCsv(const Curves& curves, std::ostream& out);

}  // namespace pairlens

#endif  // PAIRLENS_EVALUATION_H_
