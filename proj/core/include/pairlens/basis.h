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

#ifndef PAIRLENS_BASIS_H_
#define PAIRLENS_BASIS_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pairlens/player_space.h"

namespace pairlens {

enum class BasisKind { kFull, kClique, kCrossModal, kFirstOrder };

// The set of coefficients an explanation is fitted over. Coefficient layout:
//   [0]               constant
//   [1, n]            single of player (index - 1)
//   [n + 1, size())   pairs(), in order
// Every basis keeps the constant and all singles; kinds differ in the pairs.
class BasisSpec {
 public:
  static BasisSpec Full(const PlayerSpace& space);
  // Pairs restricted to (image, text) combinations.
  static BasisSpec CrossModal(const PlayerSpace& space);
  static BasisSpec FirstOrder(const PlayerSpace& space);
  // Pairs among `members` only; members are sorted and deduplicated.
  static BasisSpec Clique(const PlayerSpace& space, std::vector<int> members);

  BasisKind kind() const { return kind_; }
  const PlayerSpace& space() const { return space_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  // Empty unless kind() == kClique.
  const std::vector<int>& clique_members() const { return members_; }

  std::size_t size() const {
    return 1 + static_cast<std::size_t>(space_.size()) + pairs_.size();
  }
  bool ContainsPair(int i, int j) const;

  // "full", "cross-modal", "first-order" or "clique:K".
  std::string Name() const;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  BasisSpec(BasisKind kind, const PlayerSpace& space)
      : kind_(kind), space_(space) {}

  BasisKind kind_;
  PlayerSpace space_;
  std::vector<int> members_;
  std::vector<std::pair<int, int>> pairs_;
};

// Clique sizing for a target clique of k tokens:
//   k_text  = min(n_text, max(5, ceil(k * n_text / (n_image + n_text))))
//   k_image = k - k_text
struct CliqueSplit {
  int k_image;
  int k_text;

  friend bool operator==(const CliqueSplit&, const CliqueSplit&) = default;
};

// Throws InvalidArgumentError when k < 6 or k > space.size().
CliqueSplit SplitClique(const PlayerSpace& space, int k);

// Picks the k_image image tokens and k_text text tokens with the largest
// absolute first-order attribution; equal magnitudes go to the lower index.
BasisSpec SelectClique(const std::vector<double>& first_order,
                       const PlayerSpace& space, int k);

}  // namespace pairlens

#endif  // PAIRLENS_BASIS_H_
