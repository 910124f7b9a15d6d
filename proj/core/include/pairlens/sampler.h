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

// Mask sampling from the product-Bernoulli distribution P_p, in which every
// token is independently active with probability p.
//
// Naive mode draws m i.i.d. masks. Cross-modal mode draws m_I image-side and
// m_T text-side masks from independent streams and emits all m_I * m_T
// unions, image index major. Random streams (see random.h):
//   naive       DeriveSeed(seed, "sampler/naive")
//   image side  DeriveSeed(seed, "sampler/image")
//   text side   DeriveSeed(seed, "sampler/text")

#ifndef PAIRLENS_SAMPLER_H_
#define PAIRLENS_SAMPLER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pairlens/game.h"
#include "pairlens/mask.h"

namespace pairlens {

enum class SamplingMode { kNaive, kCrossModal };

SamplingMode ParseSamplingMode(std::string_view name);
std::string_view SamplingModeName(SamplingMode mode);

struct BudgetSplit {
  std::uint64_t m_image;
  std::uint64_t m_text;

  friend bool operator==(const BudgetSplit&, const BudgetSplit&) = default;
};

// m_T = min(2^n_T, max(4, ceil(sqrt(m) * n_T / n_I)))
// m_I = min(2^n_I, max(4, floor(sqrt(m) * n_I / n_T)))
// No rebalancing when a cap binds, so m_I * m_T may fall short of m.
// Throws InvalidArgumentError for m < 16.
BudgetSplit SplitBudget(const PlayerSpace& space, std::uint64_t m);

struct SamplePlan {
  PlayerSpace space;
  double p;
  std::uint64_t budget;
  SamplingMode mode;
  std::uint64_t seed;
  // Cross-modal only: overrides SplitBudget(space, budget).
  std::optional<BudgetSplit> split;

  static SamplePlan Naive(const PlayerSpace& space, double p, std::uint64_t m,
                          std::uint64_t seed);
  static SamplePlan CrossModal(const PlayerSpace& space, double p,
                               std::uint64_t m, std::uint64_t seed);
  static SamplePlan CrossModal(const PlayerSpace& space, double p,
                               BudgetSplit split, std::uint64_t seed);

  // Throws InvalidArgumentError for p outside (0,1), an empty budget or an
  // empty side in the split.
  void Validate() const;
  // Cross-modal split in effect; only valid for cross-modal plans.
  BudgetSplit ResolvedSplit() const;
};

struct SampleBatch {
  PlayerSpace space;
  SamplingMode mode;
  double p;
  std::uint64_t seed;
  std::vector<Mask> masks;
  // Cross-modal only: the side pools and, per emitted mask, the pool indices
  // (image, text) it was built from.
  std::vector<Mask> image_pool;
  std::vector<Mask> text_pool;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> provenance;

  std::size_t size() const { return masks.size(); }
};

SampleBatch SampleNaive(const SamplePlan& plan);
SampleBatch SampleCrossModal(const SamplePlan& plan);
SampleBatch Sample(const SamplePlan& plan);

// Emits every (image, text) union of the given pools. Pools must hold only
// their own modality's bits.
SampleBatch CombinePools(const PlayerSpace& space, double p,
                         std::uint64_t seed, std::vector<Mask> image_pool,
                         std::vector<Mask> text_pool);

// Values of every mask in the batch. Cross-modal batches on a FactoredOracle
// go through EvaluateProduct and cost m_I + m_T side encodings.
std::vector<double> EvaluateBatch(const GameOracle& game,
                                  const SampleBatch& batch);

// Mean squared residual over the batch; unbiased for p-faithfulness in both
// modes. Duplicate draws count once per draw.
double EstimatePFaithfulness(const GameOracle& nu, const GameOracle& nu_hat,
                             const SampleBatch& batch);
double EstimatePFaithfulness(const GameOracle& nu, const GameOracle& nu_hat,
                             const SamplePlan& plan);

// JSON-lines audit file: a header object followed by one object per mask:
//   {"schema_version":1,"kind":"sample-batch","mode":..,"p":..,"seed":..,
//    "n_image":..,"n_text":..,"size":..}
//   {"mask":"0110..."}                                   (naive)
//   {"mask":"0110...","image_index":a,"text_index":b}    (cross-modal)
void WriteBatchJsonl(const SampleBatch& batch, std::ostream& out);
SampleBatch ReadBatchJsonl(std::istream& in);

}  // namespace pairlens

#endif  // PAIRLENS_SAMPLER_H_
