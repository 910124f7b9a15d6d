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
#include <thread>

#include "pairlens/errors.h"
#include "pairlens/sampler.h"

namespace pairlens {
namespace {

std::vector<double> AverageRanks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    // Ranks are 1-based; a tie block [start, end) shares the mean rank.
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = rank;
    start = end;
  }
  return ranks;
}

struct GreedyRun {
  std::vector<int> order;      // insertion order, order[0] is the seed
  std::vector<double> values;  // values[k] = surrogate value at size k
};

GreedyRun RunGreedy(int seed, const Explanation& explanation,
                    const std::vector<double>& pairs, bool maximize) {
  const int n = explanation.space().size();
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> gain(un);
  std::vector<char> chosen(un, 0);
  for (int t = 0; t < n; ++t) gain[static_cast<std::size_t>(t)] = explanation.single(t);

  GreedyRun run;
  run.order.reserve(un);
  run.values.reserve(un + 1);
  double value = explanation.constant();
  run.values.push_back(value);

  auto add = [&](int t) {
    const auto ut = static_cast<std::size_t>(t);
    value += gain[ut];
    chosen[ut] = 1;
    run.order.push_back(t);
    run.values.push_back(value);
    const double* row = pairs.data() + ut * un;
    for (std::size_t u = 0; u < un; ++u) gain[u] += row[u];
  };

  add(seed);
  for (int size = 1; size < n; ++size) {
    int best = -1;
    for (int t = 0; t < n; ++t) {
      const auto ut = static_cast<std::size_t>(t);
      if (chosen[ut]) continue;
      const double g = gain[ut];
      if (best < 0 || (maximize ? g > gain[static_cast<std::size_t>(best)]
                                : g < gain[static_cast<std::size_t>(best)])) {
        best = t;
      }
    }
    add(best);
  }
  return run;
}

}  // namespace

double SpearmanCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgumentError("Spearman correlation needs equal-length inputs");
  }
  if (x.size() < 2) {
    throw UndefinedMetricError("Spearman correlation needs at least two points");
  }
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double mean = 0.5 * static_cast<double>(x.size() + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const double dx = rx[k] - mean;
    const double dy = ry[k] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedMetricError(
        "Spearman correlation is undefined: one input is constant");
  }
  return sxy / std::sqrt(sxx * syy);
}

double FaithfulnessCorrelation(const GameOracle& explanation,
                               const GameOracle& nu, double p, std::uint64_t m,
                               std::uint64_t seed) {
  CheckSameSpace(explanation.space(), nu.space(), "faithfulness correlation");
  const auto batch = Sample(SamplePlan::Naive(nu.space(), p, m, seed));
  const auto truth = nu.Evaluate(batch.masks);
  const auto approx = explanation.Evaluate(batch.masks);
  return SpearmanCorrelation(approx, truth);
}

ExtremalSubsets GreedyExtremalSubsets(const Explanation& explanation,
                                      Extremum extremum,
                                      const GreedyOptions& options) {
  if (options.seed_stride < 1) {
    throw InvalidArgumentError("greedy seed stride must be >= 1");
  }
  const PlayerSpace& space = explanation.space();
  const int n = space.size();
  const bool maximize = extremum == Extremum::kMax;
  const auto pairs = explanation.coefficients().PairMatrix();
  const int stride = n > options.full_seeding_limit ? options.seed_stride : 1;

  const auto un = static_cast<std::size_t>(n);
  std::vector<int> seeds;
  for (int seed = 0; seed < n; seed += stride) seeds.push_back(seed);

  std::vector<GreedyRun> runs(seeds.size());
  unsigned workers = options.threads > 0
                         ? static_cast<unsigned>(options.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(seeds.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < seeds.size(); r = next++) {
      runs[r] = RunGreedy(seeds[r], explanation, pairs, maximize);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<double> best(un + 1);
  std::vector<int> best_run(un + 1, -1);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (std::size_t k = 1; k <= un; ++k) {
      const double v = runs[r].values[k];
      if (best_run[k] < 0 || (maximize ? v > best[k] : v < best[k])) {
        best[k] = v;
        best_run[k] = static_cast<int>(r);
      }
    }
  }

  ExtremalSubsets result{extremum, {}, {}};
  result.masks.reserve(un + 1);
  result.masks.push_back(Mask::Empty(space));
  for (std::size_t k = 1; k <= un; ++k) {
    const auto& order = runs[static_cast<std::size_t>(best_run[k])].order;
    Mask mask(space);
    for (std::size_t r = 0; r < k; ++r) mask.set(order[r]);
    result.masks.push_back(std::move(mask));
  }
  result.surrogate_values = explanation.Evaluate(result.masks);
  return result;
}

const std::vector<double>& Curves::RequireInsertionNorm() const {
  if (!insertion_norm) throw NormalizationDegenerateError(normalization_error);
  return *insertion_norm;
}

const std::vector<double>& Curves::RequireDeletionNorm() const {
  if (!deletion_norm) throw NormalizationDegenerateError(normalization_error);
  return *deletion_norm;
}

std::vector<double> InterpolateLinear(std::span<const double> xs,
                                      std::span<const double> ys,
                                      std::span<const double> at) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw InvalidArgumentError("interpolation needs matching, non-empty knots");
  }
  std::vector<double> out;
  out.reserve(at.size());
  for (const double x : at) {
    if (x <= xs.front()) {
      out.push_back(ys.front());
      continue;
    }
    if (x >= xs.back()) {
      out.push_back(ys.back());
      continue;
    }
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    out.push_back(ys[lo] + t * (ys[hi] - ys[lo]));
  }
  return out;
}

Curves InsertionDeletionCurves(const Explanation& explanation,
                               const GameOracle& nu,
                               const GreedyOptions& options) {
  CheckSameSpace(explanation.space(), nu.space(), "insertion/deletion curves");
  const int n = nu.space().size();
  const auto un = static_cast<std::size_t>(n);
  const auto maxima = GreedyExtremalSubsets(explanation, Extremum::kMax, options);
  const auto minima = GreedyExtremalSubsets(explanation, Extremum::kMin, options);

  // maxima.masks[0] is empty and minima.masks[n] is full, so one batch of
  // both families covers the anchors as well.
  std::vector<Mask> batch;
  batch.reserve(2 * un + 2);
  batch.insert(batch.end(), maxima.masks.begin(), maxima.masks.end());
  batch.insert(batch.end(), minima.masks.begin(), minima.masks.end());
  const auto values = nu.Evaluate(batch);
  const auto max_value = [&](std::size_t k) { return values[k]; };
  const auto min_value = [&](std::size_t k) { return values[un + 1 + k]; };

  Curves curves;
  curves.n = n;
  curves.empty_value = max_value(0);
  curves.full_value = min_value(un);
  for (std::size_t k = 1; k <= un; ++k) {
    curves.insertion.push_back(max_value(k));
    curves.deletion.push_back(min_value(un - k));
    curves.aid += max_value(k) - min_value(k);
  }

  std::vector<double> xs(un + 1), ins(un + 1), del(un + 1);
  for (std::size_t k = 0; k <= un; ++k) {
    xs[k] = static_cast<double>(k) / static_cast<double>(n);
    ins[k] = max_value(k);
    del[k] = min_value(un - k);
  }
  curves.grid.resize(kCurveGridPoints);
  for (int j = 0; j < kCurveGridPoints; ++j) {
    curves.grid[static_cast<std::size_t>(j)] =
        static_cast<double>(j) / static_cast<double>(kCurveGridPoints - 1);
  }
  curves.insertion_raw = InterpolateLinear(xs, ins, curves.grid);
  curves.deletion_raw = InterpolateLinear(xs, del, curves.grid);

  const double span = curves.full_value - curves.empty_value;
  if (span == 0.0 || !std::isfinite(span)) {
    curves.normalization_error =
        "nu(full) equals nu(empty); normalized curves are undefined";
  } else {
    auto normalize = [&](const std::vector<double>& raw) {
      std::vector<double> out(raw.size());
      for (std::size_t k = 0; k < raw.size(); ++k) {
        out[k] = (raw[k] - curves.empty_value) / span + 0.0;  // no -0 in CSVs
      }
      return out;
    };
    curves.insertion_norm = normalize(curves.insertion_raw);
    curves.deletion_norm = normalize(curves.deletion_raw);
  }
  return curves;
}

void WriteCurvesCsv(const Curves& curves, std::ostream& out) {
  out << "# pairlens-curves v" << kCurvesCsvVersion << '\n';
  out << "fraction,insertion_raw,deletion_raw,insertion_norm,deletion_norm\n";
  const auto old_precision = out.precision(17);
  for (std::size_t j = 0; j < curves.grid.size(); ++j) {
    out << curves.grid[j] << ',' << curves.insertion_raw[j] << ','
        << curves.deletion_raw[j] << ',';
    if (curves.insertion_norm) out << (*curves.insertion_norm)[j];
    out << ',';
    if (curves.deletion_norm) out << (*curves.deletion_norm)[j];
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace pairlens
