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

#include "pairlens/sampler.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "pairlens/errors.h"
#include "pairlens/random.h"

namespace pairlens {
namespace {

constexpr int kSchemaVersion = 1;

std::uint64_t CappedPowerOfTwo(int exponent) {
  if (exponent >= 63) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << exponent;
}

// Draws one mask over players [begin, end) of `space`.
Mask DrawMask(const PlayerSpace& space, int begin, int end, double p,
              Philox4x32& rng) {
  Mask mask(space);
  for (int player = begin; player < end; ++player) {
    if (rng.NextBernoulli(p)) mask.set(player);
  }
  return mask;
}

}  // namespace

SamplingMode ParseSamplingMode(std::string_view name) {
  if (name == "naive") return SamplingMode::kNaive;
  if (name == "cross-modal") return SamplingMode::kCrossModal;
  throw InvalidArgumentError("unknown sampling mode '" + std::string(name) +
                             "' (expected naive or cross-modal)");
}

std::string_view SamplingModeName(SamplingMode mode) {
  return mode == SamplingMode::kNaive ? "naive" : "cross-modal";
}

BudgetSplit SplitBudget(const PlayerSpace& space, std::uint64_t m) {
  if (m < 16) {
    throw InvalidArgumentError("budget split needs m >= 16, got " +
                               std::to_string(m));
  }
  const double root = std::sqrt(static_cast<double>(m));
  const double n_image = space.n_image();
  const double n_text = space.n_text();
  const auto text_share =
      static_cast<std::uint64_t>(std::ceil(root * n_text / n_image));
  const auto image_share =
      static_cast<std::uint64_t>(std::floor(root * n_image / n_text));
  BudgetSplit split;
  split.m_text = std::min(CappedPowerOfTwo(space.n_text()),
                          std::max<std::uint64_t>(4, text_share));
  split.m_image = std::min(CappedPowerOfTwo(space.n_image()),
                           std::max<std::uint64_t>(4, image_share));
  return split;
}

SamplePlan SamplePlan::Naive(const PlayerSpace& space, double p,
                             std::uint64_t m, std::uint64_t seed) {
  return SamplePlan{space, p, m, SamplingMode::kNaive, seed, std::nullopt};
}

SamplePlan SamplePlan::CrossModal(const PlayerSpace& space, double p,
                                  std::uint64_t m, std::uint64_t seed) {
  return SamplePlan{space, p, m, SamplingMode::kCrossModal, seed,
                    std::nullopt};
}

SamplePlan SamplePlan::CrossModal(const PlayerSpace& space, double p,
                                  BudgetSplit split, std::uint64_t seed) {
  return SamplePlan{space, p, split.m_image * split.m_text,
                    SamplingMode::kCrossModal, seed, split};
}

void SamplePlan::Validate() const {
  CheckOpenUnitInterval(p);
  if (budget == 0) throw InvalidArgumentError("sampling budget must be > 0");
  if (mode == SamplingMode::kCrossModal) {
    const auto resolved = ResolvedSplit();
    if (resolved.m_image == 0 || resolved.m_text == 0) {
      throw InvalidArgumentError("cross-modal split needs m_I * m_T >= 1");
    }
  }
}

BudgetSplit SamplePlan::ResolvedSplit() const {
  if (mode != SamplingMode::kCrossModal) {
    throw InvalidArgumentError("budget split requested for a naive plan");
  }
  return split ? *split : SplitBudget(space, budget);
}

SampleBatch SampleNaive(const SamplePlan& plan) {
  plan.Validate();
  if (plan.mode != SamplingMode::kNaive) {
    throw InvalidArgumentError("SampleNaive called with a cross-modal plan");
  }
  auto rng = MakeStream(plan.seed, "sampler/naive");
  SampleBatch batch{plan.space, SamplingMode::kNaive, plan.p, plan.seed,
                    {}, {}, {}, {}};
  batch.masks.reserve(plan.budget);
  for (std::uint64_t k = 0; k < plan.budget; ++k) {
    batch.masks.push_back(
        DrawMask(plan.space, 0, plan.space.size(), plan.p, rng));
  }
  return batch;
}

SampleBatch SampleCrossModal(const SamplePlan& plan) {
  plan.Validate();
  if (plan.mode != SamplingMode::kCrossModal) {
    throw InvalidArgumentError("SampleCrossModal called with a naive plan");
  }
  const BudgetSplit split = plan.ResolvedSplit();
  const PlayerSpace& space = plan.space;
  auto image_rng = MakeStream(plan.seed, "sampler/image");
  auto text_rng = MakeStream(plan.seed, "sampler/text");
  std::vector<Mask> image_pool;
  image_pool.reserve(split.m_image);
  for (std::uint64_t k = 0; k < split.m_image; ++k) {
    image_pool.push_back(
        DrawMask(space, 0, space.first_text(), plan.p, image_rng));
  }
  std::vector<Mask> text_pool;
  text_pool.reserve(split.m_text);
  for (std::uint64_t k = 0; k < split.m_text; ++k) {
    text_pool.push_back(
        DrawMask(space, space.first_text(), space.size(), plan.p, text_rng));
  }
  return CombinePools(space, plan.p, plan.seed, std::move(image_pool),
                      std::move(text_pool));
}

SampleBatch Sample(const SamplePlan& plan) {
  return plan.mode == SamplingMode::kNaive ? SampleNaive(plan)
                                           : SampleCrossModal(plan);
}

SampleBatch CombinePools(const PlayerSpace& space, double p,
                         std::uint64_t seed, std::vector<Mask> image_pool,
                         std::vector<Mask> text_pool) {
  for (const auto& mask : image_pool) {
    if (mask.space() != space || mask.count_text() != 0) {
      throw InvalidMaskError("image pool mask carries text bits or wrong width");
    }
  }
  for (const auto& mask : text_pool) {
    if (mask.space() != space || mask.count_image() != 0) {
      throw InvalidMaskError("text pool mask carries image bits or wrong width");
    }
  }
  SampleBatch batch{space, SamplingMode::kCrossModal, p, seed, {}, {}, {}, {}};
  batch.masks.reserve(image_pool.size() * text_pool.size());
  batch.provenance.reserve(image_pool.size() * text_pool.size());
  for (std::size_t a = 0; a < image_pool.size(); ++a) {
    for (std::size_t b = 0; b < text_pool.size(); ++b) {
      batch.masks.push_back(image_pool[a] | text_pool[b]);
      batch.provenance.emplace_back(static_cast<std::uint32_t>(a),
                                    static_cast<std::uint32_t>(b));
    }
  }
  batch.image_pool = std::move(image_pool);
  batch.text_pool = std::move(text_pool);
  return batch;
}

std::vector<double> EvaluateBatch(const GameOracle& game,
                                  const SampleBatch& batch) {
  CheckSameSpace(game.space(), batch.space, "batch evaluation");
  if (batch.mode == SamplingMode::kCrossModal) {
    if (const auto* factored = dynamic_cast<const FactoredOracle*>(&game)) {
      return factored->EvaluateProduct(batch.image_pool, batch.text_pool);
    }
  }
  return game.Evaluate(batch.masks);
}

double EstimatePFaithfulness(const GameOracle& nu, const GameOracle& nu_hat,
                             const SampleBatch& batch) {
  CheckSameSpace(nu.space(), nu_hat.space(), "p-faithfulness estimate");
  if (batch.masks.empty()) {
    throw InvalidArgumentError("cannot estimate p-faithfulness on an empty batch");
  }
  const auto truth = EvaluateBatch(nu, batch);
  const auto approx = EvaluateBatch(nu_hat, batch);
  double total = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double residual = truth[k] - approx[k];
    total += residual * residual;
  }
  return total / static_cast<double>(truth.size());
}

double EstimatePFaithfulness(const GameOracle& nu, const GameOracle& nu_hat,
                             const SamplePlan& plan) {
  return EstimatePFaithfulness(nu, nu_hat, Sample(plan));
}

void WriteBatchJsonl(const SampleBatch& batch, std::ostream& out) {
  nlohmann::json header = {
      {"schema_version", kSchemaVersion},
      {"kind", "sample-batch"},
      {"mode", SamplingModeName(batch.mode)},
      {"p", batch.p},
      {"seed", batch.seed},
      {"n_image", batch.space.n_image()},
      {"n_text", batch.space.n_text()},
      {"size", batch.masks.size()},
  };
  if (batch.mode == SamplingMode::kCrossModal) {
    header["m_image"] = batch.image_pool.size();
    header["m_text"] = batch.text_pool.size();
  }
  out << header.dump() << '\n';
  for (std::size_t k = 0; k < batch.masks.size(); ++k) {
    nlohmann::json line = {{"mask", batch.masks[k].ToBitstring()}};
    if (batch.mode == SamplingMode::kCrossModal) {
      line["image_index"] = batch.provenance[k].first;
      line["text_index"] = batch.provenance[k].second;
    }
    out << line.dump() << '\n';
  }
}

SampleBatch ReadBatchJsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("sample batch file is empty");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed sample batch header: ") + e.what());
  }
  if (header.value("kind", "") != "sample-batch" ||
      header.value("schema_version", 0) != kSchemaVersion) {
    throw IoError("not a version-1 sample batch file");
  }
  const PlayerSpace space(header.at("n_image").get<int>(),
                          header.at("n_text").get<int>());
  SampleBatch batch{space,
                    ParseSamplingMode(header.at("mode").get<std::string>()),
                    header.at("p").get<double>(),
                    header.at("seed").get<std::uint64_t>(),
                    {},
                    {},
                    {},
                    {}};
  if (batch.mode == SamplingMode::kCrossModal) {
    batch.image_pool.assign(header.at("m_image").get<std::size_t>(),
                            Mask(space));
    batch.text_pool.assign(header.at("m_text").get<std::size_t>(),
                           Mask(space));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto entry = nlohmann::json::parse(line);
    Mask mask = Mask::FromBitstring(space, entry.at("mask").get<std::string>());
    if (batch.mode == SamplingMode::kCrossModal) {
      const auto a = entry.at("image_index").get<std::uint32_t>();
      const auto b = entry.at("text_index").get<std::uint32_t>();
      if (a >= batch.image_pool.size() || b >= batch.text_pool.size()) {
        throw IoError("provenance index outside the declared pools");
      }
      batch.image_pool[a] = mask.ImagePart();
      batch.text_pool[b] = mask.TextPart();
      batch.provenance.emplace_back(a, b);
    }
    batch.masks.push_back(std::move(mask));
  }
  if (batch.masks.size() != header.at("size").get<std::size_t>()) {
    throw IoError("sample batch declares " +
                  std::to_string(header.at("size").get<std::size_t>()) +
                  " masks but holds " + std::to_string(batch.masks.size()));
  }
  return batch;
}

}  // namespace pairlens
