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

#include <algorithm>
#include <cmath>
#include <string>

#include "pairlens/errors.h"
#include "pairlens/random.h"

namespace pairlens {
namespace {

void CheckSpan(const PlayerSpace& space, std::span<const Mask> masks) {
  for (std::size_t k = 0; k < masks.size(); ++k) {
    if (masks[k].space() != space) {
      throw InvalidMaskError("mask " + std::to_string(k) + " built for " +
                             masks[k].space().ToString() +
                             " evaluated on a game over " + space.ToString());
    }
  }
}

constexpr std::size_t kTabulateChunk = 1 << 14;

}  // namespace

std::vector<double> GameOracle::Evaluate(std::span<const Mask> masks) const {
  CheckSpan(space(), masks);
  if (masks.empty()) return {};
  auto values = DoEvaluate(masks);
  if (values.size() != masks.size()) {
    throw ProtocolError("oracle returned " + std::to_string(values.size()) +
                        " values for " + std::to_string(masks.size()) +
                        " masks");
  }
  return values;
}

double GameOracle::Evaluate(const Mask& mask) const {
  return Evaluate(std::span<const Mask>(&mask, 1)).front();
}

std::vector<double> FactoredOracle::EvaluateProduct(
    std::span<const Mask> image_masks, std::span<const Mask> text_masks) const {
  CheckSpan(space(), image_masks);
  CheckSpan(space(), text_masks);
  for (const auto& mask : image_masks) {
    if (mask.count_text() != 0) {
      throw InvalidMaskError("image-side mask carries text bits");
    }
  }
  for (const auto& mask : text_masks) {
    if (mask.count_image() != 0) {
      throw InvalidMaskError("text-side mask carries image bits");
    }
  }
  return DoEvaluateProduct(image_masks, text_masks);
}

// --- TabulatedGame ---------------------------------------------------------

TabulatedGame::TabulatedGame(const PlayerSpace& space,
                             std::vector<double> values)
    : space_(space), values_(std::move(values)) {
  space_.CheckEnumerable();
  if (values_.size() != space_.num_masks()) {
    throw InvalidArgumentError(
        "tabulated game over " + std::to_string(space_.size()) +
        " players needs " + std::to_string(space_.num_masks()) +
        " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw InvalidArgumentError("tabulated game value at index " +
                                 std::to_string(k) + " is not finite");
    }
  }
}

TabulatedGame TabulatedGame::Tabulate(const GameOracle& source) {
  const PlayerSpace& space = source.space();
  space.CheckEnumerable();
  std::vector<double> values;
  values.reserve(space.num_masks());
  std::vector<Mask> chunk;
  for (std::uint64_t index = 0; index < space.num_masks(); ++index) {
    chunk.push_back(Mask::FromIndex(space, index));
    if (chunk.size() == kTabulateChunk || index + 1 == space.num_masks()) {
      auto part = source.Evaluate(chunk);
      values.insert(values.end(), part.begin(), part.end());
      chunk.clear();
    }
  }
  return TabulatedGame(space, std::move(values));
}

std::vector<double> TabulatedGame::DoEvaluate(
    std::span<const Mask> masks) const {
  std::vector<double> out;
  out.reserve(masks.size());
  for (const auto& mask : masks) out.push_back(values_[mask.ToIndex()]);
  return out;
}

// --- TwoAdditiveGame -------------------------------------------------------

TwoAdditiveGame::TwoAdditiveGame(const PlayerSpace& space)
    : space_(space), singles_(static_cast<std::size_t>(space.size()), 0.0) {}

void TwoAdditiveGame::set_single(int player, double value) {
  if (!space_.contains(player)) {
    throw InvalidArgumentError("player " + std::to_string(player) +
                               " outside " + space_.ToString());
  }
  singles_[static_cast<std::size_t>(player)] = value;
}

void TwoAdditiveGame::set_pair(int i, int j, double value) {
  if (i == j) {
    throw InvalidArgumentError("pair endpoints must differ, got (" +
                               std::to_string(i) + ", " + std::to_string(j) +
                               ")");
  }
  if (!space_.contains(i) || !space_.contains(j)) {
    throw InvalidArgumentError("pair (" + std::to_string(i) + ", " +
                               std::to_string(j) + ") outside " +
                               space_.ToString());
  }
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair(i, j),
                             [](const PairTerm& term, std::pair<int, int> key) {
                               return std::pair(term.i, term.j) < key;
                             });
  if (it != pairs_.end() && it->i == i && it->j == j) {
    it->value = value;
  } else {
    pairs_.insert(it, PairTerm{i, j, value});
  }
}

double TwoAdditiveGame::pair(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair(i, j),
                             [](const PairTerm& term, std::pair<int, int> key) {
                               return std::pair(term.i, term.j) < key;
                             });
  if (it != pairs_.end() && it->i == i && it->j == j) return it->value;
  return 0.0;
}

double TwoAdditiveGame::Value(const Mask& mask) const {
  double total = constant_;
  for (int player : mask.Members()) {
    total += singles_[static_cast<std::size_t>(player)];
  }
  for (const auto& term : pairs_) {
    if (mask.test(term.i) && mask.test(term.j)) total += term.value;
  }
  return total;
}

std::vector<double> TwoAdditiveGame::PairMatrix() const {
  const auto n = static_cast<std::size_t>(space_.size());
  std::vector<double> matrix(n * n, 0.0);
  for (const auto& term : pairs_) {
    const auto i = static_cast<std::size_t>(term.i);
    const auto j = static_cast<std::size_t>(term.j);
    matrix[i * n + j] = term.value;
    matrix[j * n + i] = term.value;
  }
  return matrix;
}

std::vector<double> TwoAdditiveGame::DoEvaluate(
    std::span<const Mask> masks) const {
  std::vector<double> out;
  out.reserve(masks.size());
  for (const auto& mask : masks) out.push_back(Value(mask));
  return out;
}

// --- FactoredGame ----------------------------------------------------------

FactoredGame::FactoredGame(const PlayerSpace& space, int dim,
                           double logit_scale, std::uint64_t seed)
    : space_(space), dim_(dim), logit_scale_(logit_scale), seed_(seed) {
  if (dim < 1) throw InvalidArgumentError("embedding dim must be positive");
  auto fill = [&](std::vector<double>* v, std::size_t count,
                  std::string_view label) {
    auto rng = MakeStream(seed, label);
    v->resize(count);
    for (auto& x : *v) x = rng.NextGaussian();
  };
  const auto d = static_cast<std::size_t>(dim);
  fill(&image_weights_, d * static_cast<std::size_t>(space.n_image()),
       "factored/image-weights");
  fill(&image_bias_, d, "factored/image-bias");
  fill(&text_weights_, d * static_cast<std::size_t>(space.n_text()),
       "factored/text-weights");
  fill(&text_bias_, d, "factored/text-bias");
}

void FactoredGame::ResetCounters() const {
  image_encodings_ = 0;
  text_encodings_ = 0;
}

std::vector<double> FactoredGame::Encode(const Mask& mask,
                                         bool image_side) const {
  const auto d = static_cast<std::size_t>(dim_);
  const auto& weights = image_side ? image_weights_ : text_weights_;
  const auto& bias = image_side ? image_bias_ : text_bias_;
  const int begin = image_side ? 0 : space_.first_text();
  const int end = image_side ? space_.first_text() : space_.size();
  const auto width = static_cast<std::size_t>(end - begin);
  std::vector<double> embedding(bias);
  for (int player = begin; player < end; ++player) {
    if (!mask.test(player)) continue;
    const auto column = static_cast<std::size_t>(player - begin);
    for (std::size_t r = 0; r < d; ++r) {
      embedding[r] += weights[r * width + column];
    }
  }
  double norm = 0.0;
  for (auto& x : embedding) {
    x = std::tanh(x);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& x : embedding) x /= norm;
  }
  (image_side ? image_encodings_ : text_encodings_).fetch_add(1);
  return embedding;
}

double FactoredGame::Similarity(const std::vector<double>& a,
                                const std::vector<double>& b) const {
  double dot = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) dot += a[r] * b[r];
  return logit_scale_ * dot;
}

std::vector<double> FactoredGame::DoEvaluate(
    std::span<const Mask> masks) const {
  std::vector<double> out;
  out.reserve(masks.size());
  for (const auto& mask : masks) {
    out.push_back(Similarity(Encode(mask, true), Encode(mask, false)));
  }
  return out;
}

std::vector<double> FactoredGame::DoEvaluateProduct(
    std::span<const Mask> image_masks, std::span<const Mask> text_masks) const {
  std::vector<std::vector<double>> image_side;
  image_side.reserve(image_masks.size());
  for (const auto& mask : image_masks) image_side.push_back(Encode(mask, true));
  std::vector<std::vector<double>> text_side;
  text_side.reserve(text_masks.size());
  for (const auto& mask : text_masks) text_side.push_back(Encode(mask, false));
  std::vector<double> out;
  out.reserve(image_side.size() * text_side.size());
  for (const auto& a : image_side) {
    for (const auto& b : text_side) out.push_back(Similarity(a, b));
  }
  return out;
}

// --- MemoizedOracle --------------------------------------------------------

std::size_t MemoizedOracle::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::vector<double> MemoizedOracle::DoEvaluate(
    std::span<const Mask> masks) const {
  std::vector<double> out(masks.size());
  std::vector<Mask> missing;
  std::unordered_map<Mask, std::size_t, MaskHash> missing_index;
  {
    std::lock_guard lock(mutex_);
    for (const auto& mask : masks) {
      if (cache_.count(mask) == 0 && missing_index.count(mask) == 0) {
        missing_index.emplace(mask, missing.size());
        missing.push_back(mask);
      }
    }
  }
  if (!missing.empty()) {
    auto fresh = inner_.Evaluate(missing);
    inner_queries_ += missing.size();
    std::lock_guard lock(mutex_);
    for (std::size_t k = 0; k < missing.size(); ++k) {
      cache_.emplace(missing[k], fresh[k]);
    }
  }
  std::lock_guard lock(mutex_);
  for (std::size_t k = 0; k < masks.size(); ++k) out[k] = cache_.at(masks[k]);
  return out;
}

}  // namespace pairlens
