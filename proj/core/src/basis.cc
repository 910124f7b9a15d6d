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

#include "pairlens/basis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pairlens/errors.h"

namespace pairlens {

namespace {
constexpr int kMinCliqueText = 5;
}  // namespace

BasisSpec BasisSpec::Full(const PlayerSpace& space) {
  BasisSpec basis(BasisKind::kFull, space);
  for (int i = 0; i < space.size(); ++i) {
    for (int j = i + 1; j < space.size(); ++j) basis.pairs_.emplace_back(i, j);
  }
  return basis;
}

BasisSpec BasisSpec::CrossModal(const PlayerSpace& space) {
  BasisSpec basis(BasisKind::kCrossModal, space);
  for (int i = 0; i < space.n_image(); ++i) {
    for (int j = space.first_text(); j < space.size(); ++j) {
      basis.pairs_.emplace_back(i, j);
    }
  }
  return basis;
}

BasisSpec BasisSpec::FirstOrder(const PlayerSpace& space) {
  return BasisSpec(BasisKind::kFirstOrder, space);
}

BasisSpec BasisSpec::Clique(const PlayerSpace& space,
                            std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (int member : members) {
    if (!space.contains(member)) {
      throw InvalidArgumentError("clique member " + std::to_string(member) +
                                 " outside " + space.ToString());
    }
  }
  BasisSpec basis(BasisKind::kClique, space);
  basis.members_ = std::move(members);
  for (std::size_t a = 0; a < basis.members_.size(); ++a) {
    for (std::size_t b = a + 1; b < basis.members_.size(); ++b) {
      basis.pairs_.emplace_back(basis.members_[a], basis.members_[b]);
    }
  }
  return basis;
}

bool BasisSpec::ContainsPair(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(pairs_.begin(), pairs_.end(), std::pair(i, j));
}

std::string BasisSpec::Name() const {
  switch (kind_) {
    case BasisKind::kFull:
      return "full";
    case BasisKind::kCrossModal:
      return "cross-modal";
    case BasisKind::kFirstOrder:
      return "first-order";
    case BasisKind::kClique:
      return "clique:" + std::to_string(members_.size());
  }
  return "unknown";
}

CliqueSplit SplitClique(const PlayerSpace& space, int k) {
  if (k < kMinCliqueText + 1) {
    throw InvalidArgumentError("clique size " + std::to_string(k) +
                               " is below the minimum of " +
                               std::to_string(kMinCliqueText + 1));
  }
  if (k > space.size()) {
    throw InvalidArgumentError("clique size " + std::to_string(k) +
                               " exceeds the " + std::to_string(space.size()) +
                               " players of " + space.ToString());
  }
  // Integer ceil of k * n_text / n avoids floating rounding at exact ratios.
  const long numerator = static_cast<long>(k) * space.n_text();
  const long n = space.size();
  const int proportional = static_cast<int>((numerator + n - 1) / n);
  const int k_text = std::min(space.n_text(),
                              std::max(kMinCliqueText, proportional));
  return CliqueSplit{k - k_text, k_text};
}

BasisSpec SelectClique(const std::vector<double>& first_order,
                       const PlayerSpace& space, int k) {
  if (first_order.size() != static_cast<std::size_t>(space.size())) {
    throw InvalidArgumentError("first-order attribution has " +
                               std::to_string(first_order.size()) +
                               " entries for " + space.ToString());
  }
  const CliqueSplit split = SplitClique(space, k);
  auto top = [&](int begin, int end, int count) {
    std::vector<int> players(static_cast<std::size_t>(end - begin));
    std::iota(players.begin(), players.end(), begin);
    std::stable_sort(players.begin(), players.end(), [&](int a, int b) {
      return std::abs(first_order[static_cast<std::size_t>(a)]) >
             std::abs(first_order[static_cast<std::size_t>(b)]);
    });
    players.resize(static_cast<std::size_t>(count));
    return players;
  };
  std::vector<int> members = top(0, space.n_image(), split.k_image);
  const auto text = top(space.first_text(), space.size(), split.k_text);
  members.insert(members.end(), text.begin(), text.end());
  return BasisSpec::Clique(space, std::move(members));
}

}  // namespace pairlens
