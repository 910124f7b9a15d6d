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

// Cooperative games over the players of a two-modality input.
//
// A game maps every mask (subset of active tokens) to a real value. Games are
// immutable after construction; Evaluate() may be called concurrently.

#ifndef PAIRLENS_GAME_H_
#define PAIRLENS_GAME_H_

#include <atomic>
#include <cstdint>
#include <mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pairlens/mask.h"
#include "pairlens/player_space.h"

namespace pairlens {

class GameOracle {
 public:
  virtual ~GameOracle() = default;

  virtual const PlayerSpace& space() const = 0;

  // output[k] = value of masks[k]. Throws InvalidMaskError if any mask was
  // built for another space.
  std::vector<double> Evaluate(std::span<const Mask> masks) const;
  double Evaluate(const Mask& mask) const;

 protected:
  // Masks are already validated against space().
  virtual std::vector<double> DoEvaluate(std::span<const Mask> masks) const = 0;
};

// A game whose value factors through independent image-side and text-side
// encodings, so a product of m_I image masks and m_T text masks costs
// m_I + m_T side encodings instead of 2 * m_I * m_T.
class FactoredOracle : public GameOracle {
 public:
  // Row-major m_I x m_T values: out[a * m_T + b] = value(image[a] | text[b]).
  // Image masks must have no text bits and vice versa.
  std::vector<double> EvaluateProduct(std::span<const Mask> image_masks,
                                      std::span<const Mask> text_masks) const;

 protected:
  virtual std::vector<double> DoEvaluateProduct(
      std::span<const Mask> image_masks,
      std::span<const Mask> text_masks) const = 0;
};

// Full value table indexed by mask bits (bit k of the index is player k).
class TabulatedGame final : public GameOracle {
 public:
  // Throws SpaceTooLargeError beyond the enumeration limit and
  // InvalidArgumentError on a wrong length or non-finite entry.
  TabulatedGame(const PlayerSpace& space, std::vector<double> values);

  // Enumerates every mask of `source`.
  static TabulatedGame Tabulate(const GameOracle& source);

  const PlayerSpace& space() const override { return space_; }
  double value(std::uint64_t index) const { return values_[index]; }
  const std::vector<double>& values() const { return values_; }

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override;

 private:
  PlayerSpace space_;
  std::vector<double> values_;
};

struct PairTerm {
  int i;
  int j;
  double value;

  friend bool operator==(const PairTerm&, const PairTerm&) = default;
};

// value(M) = constant + sum_{i in M} singles[i] + sum_{{i,j} in M} pair(i,j).
class TwoAdditiveGame final : public GameOracle {
 public:
  explicit TwoAdditiveGame(const PlayerSpace& space);

  const PlayerSpace& space() const override { return space_; }

  double constant() const { return constant_; }
  void set_constant(double value) { constant_ = value; }

  const std::vector<double>& singles() const { return singles_; }
  double single(int player) const {
    return singles_[static_cast<std::size_t>(player)];
  }
  void set_single(int player, double value);

  // Pairs are unordered; (i, j) and (j, i) name the same term. Setting an
  // existing pair overwrites it. Throws on i == j or out-of-range players.
  void set_pair(int i, int j, double value);
  // Zero when the pair is absent.
  double pair(int i, int j) const;
  // Sorted by (i, j) with i < j.
  const std::vector<PairTerm>& pairs() const { return pairs_; }

  double Value(const Mask& mask) const;
  // Dense symmetric n x n matrix of pair values (zero diagonal), row-major.
  std::vector<double> PairMatrix() const;

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override;

 private:
  PlayerSpace space_;
  double constant_ = 0.0;
  std::vector<double> singles_;
  std::vector<PairTerm> pairs_;
};

// Synthetic two-tower similarity game: each side maps its active tokens
// through a random one-layer tanh encoder, and the value is
//   logit_scale * cos(image_embedding, text_embedding).
// Counts side encodings so the cost of naive vs. product evaluation can be
// compared.
class FactoredGame final : public FactoredOracle {
 public:
  FactoredGame(const PlayerSpace& space, int dim, double logit_scale,
               std::uint64_t seed);

  const PlayerSpace& space() const override { return space_; }
  int dim() const { return dim_; }
  double logit_scale() const { return logit_scale_; }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t image_encodings() const { return image_encodings_.load(); }
  std::uint64_t text_encodings() const { return text_encodings_.load(); }
  std::uint64_t side_encodings() const {
    return image_encodings() + text_encodings();
  }
  void ResetCounters() const;

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override;
  std::vector<double> DoEvaluateProduct(
      std::span<const Mask> image_masks,
      std::span<const Mask> text_masks) const override;

 private:
  // Unit-norm embedding of one side.
  std::vector<double> Encode(const Mask& mask, bool image_side) const;
  double Similarity(const std::vector<double>& a,
                    const std::vector<double>& b) const;

  PlayerSpace space_;
  int dim_;
  double logit_scale_;
  std::uint64_t seed_;
  std::vector<double> image_weights_;  // dim x n_image
  std::vector<double> image_bias_;
  std::vector<double> text_weights_;  // dim x n_text
  std::vector<double> text_bias_;
  mutable std::atomic<std::uint64_t> image_encodings_{0};
  mutable std::atomic<std::uint64_t> text_encodings_{0};
};

// Caches values of repeated masks for the lifetime of one run. The wrapped
// oracle must outlive this object.
class MemoizedOracle final : public GameOracle {
 public:
  explicit MemoizedOracle(const GameOracle& inner) : inner_(inner) {}

  const PlayerSpace& space() const override { return inner_.space(); }
  std::size_t cache_size() const;
  std::uint64_t inner_queries() const { return inner_queries_.load(); }

 protected:
  std::vector<double> DoEvaluate(std::span<const Mask> masks) const override;

 private:
  const GameOracle& inner_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Mask, double, MaskHash> cache_;
  mutable std::atomic<std::uint64_t> inner_queries_{0};
};

}  // namespace pairlens

#endif  // PAIRLENS_GAME_H_
