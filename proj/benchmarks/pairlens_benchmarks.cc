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

#include <benchmark/benchmark.h>

#include "pairlens/evaluation.h"
#include "pairlens/exact.h"
#include "pairlens/random.h"
#include "pairlens/random_game.h"
#include "pairlens/regression.h"
#include "pairlens/sampler.h"

namespace pairlens {
namespace {

void BM_PhiloxU64(benchmark::State& state) {
  Philox4x32 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.NextU64());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxU64);

void BM_SampleNaive(benchmark::State& state) {
  const PlayerSpace space(49, 10);
  const auto m = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Sample(SamplePlan::Naive(space, 0.5, m, 3)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m));
}
BENCHMARK(BM_SampleNaive)->Arg(1 << 10)->Arg(1 << 14);

void BM_SampleCrossModal(benchmark::State& state) {
  const PlayerSpace space(49, 10);
  const auto m = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Sample(SamplePlan::CrossModal(space, 0.5, m, 3)));
  }
}
BENCHMARK(BM_SampleCrossModal)->Arg(1 << 10)->Arg(1 << 14);

// Cost of one full-basis fit, dominated by Gram accumulation.
void BM_FitFullBasis(benchmark::State& state) {
  const PlayerSpace space(static_cast<int>(state.range(0)), 8);
  const auto game = RandomTwoAdditiveGame(space, 1);
  const auto batch = Sample(SamplePlan::Naive(space, 0.5, 4096, 2));
  const auto values = EvaluateBatch(game, batch);
  const auto basis = BasisSpec::Full(space);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fit(batch, values, basis, Kernel::WeightedBanzhaf(0.5)));
  }
  state.counters["basis"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_FitFullBasis)->Arg(8)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_ExactSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto table = RandomTabulatedGame(PlayerSpace(n / 2, n - n / 2), 4);
  for (auto _ : state) benchmark::DoNotOptimize(ExactFaithfulInteractions(table, 0.5));
}
BENCHMARK(BM_ExactSolve)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GreedyExtremalSubsets(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PlayerSpace space(n - 10, 10);
  const auto game = RandomTwoAdditiveGame(space, 5);
  const Explanation e(BasisSpec::Full(space), Kernel::WeightedBanzhaf(0.5), game);
  for (auto _ : state) benchmark::DoNotOptimize(GreedyExtremalSubsets(e, Extremum::kMax));
}
BENCHMARK(BM_GreedyExtremalSubsets)->Arg(59)->Arg(206)->Unit(benchmark::kMillisecond);

// Side encodings are the expensive step of a real two-tower model; compare
// the product path with pointwise evaluation of the same masks.
void BM_FactoredEvaluation(benchmark::State& state) {
  const PlayerSpace space(49, 10);
  const auto game = RandomFactoredGame(space, 6);
  const auto batch = Sample(SamplePlan::CrossModal(space, 0.5, BudgetSplit{64, 64}, 7));
  const bool product = state.range(0) == 1;
  for (auto _ : state) {
    if (product) {
      benchmark::DoNotOptimize(EvaluateBatch(game, batch));
    } else {
      benchmark::DoNotOptimize(game.Evaluate(batch.masks));
    }
  }
  state.SetLabel(product ? "product" : "pointwise");
}
BENCHMARK(BM_FactoredEvaluation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pairlens

BENCHMARK_MAIN();
