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

#include "pairlens/random_game.h"

#include <string>
#include <vector>

#include "pairlens/errors.h"
#include "pairlens/random.h"

namespace pairlens {

namespace {
constexpr int kFactoredDim = 8;
constexpr double kFactoredLogitScale = 10.0;
}  // namespace

GameKind ParseGameKind(std::string_view name) {
  if (name == "tabulated") return GameKind::kTabulated;
  if (name == "two-additive") return GameKind::kTwoAdditive;
  if (name == "factored") return GameKind::kFactored;
  throw InvalidArgumentError("unknown game kind '" + std::string(name) +
                             "' (expected tabulated, two-additive, factored)");
}

std::string_view GameKindName(GameKind kind) {
  switch (kind) {
    case GameKind::kTabulated:
      return "tabulated";
    case GameKind::kTwoAdditive:
      return "two-additive";
    case GameKind::kFactored:
      return "factored";
  }
  return "unknown";
}

TabulatedGame RandomTabulatedGame(const PlayerSpace& space,
                                  std::uint64_t seed) {
  space.CheckEnumerable();
  auto rng = MakeStream(seed, "game/tabulated");
  std::vector<double> values(space.num_masks());
  for (auto& v : values) v = rng.NextUniform(-1.0, 1.0);
  return TabulatedGame(space, std::move(values));
}

TwoAdditiveGame RandomTwoAdditiveGame(const PlayerSpace& space,
                                      std::uint64_t seed) {
  auto rng = MakeStream(seed, "game/two-additive");
  TwoAdditiveGame game(space);
  game.set_constant(rng.NextUniform(-1.0, 1.0));
  for (int i = 0; i < space.size(); ++i) {
    game.set_single(i, rng.NextUniform(-1.0, 1.0));
  }
  for (int i = 0; i < space.size(); ++i) {
    for (int j = i + 1; j < space.size(); ++j) {
      game.set_pair(i, j, rng.NextUniform(-1.0, 1.0));
    }
  }
  return game;
}

FactoredGame RandomFactoredGame(const PlayerSpace& space, std::uint64_t seed) {
  return FactoredGame(space, kFactoredDim, kFactoredLogitScale, seed);
}

std::unique_ptr<GameOracle> MakeRandomGame(const PlayerSpace& space,
                                           GameKind kind, std::uint64_t seed) {
  switch (kind) {
    case GameKind::kTabulated:
      return std::make_unique<TabulatedGame>(RandomTabulatedGame(space, seed));
    case GameKind::kTwoAdditive:
      return std::make_unique<TwoAdditiveGame>(
          RandomTwoAdditiveGame(space, seed));
    case GameKind::kFactored:
      return std::make_unique<FactoredGame>(space, kFactoredDim,
                                            kFactoredLogitScale, seed);
  }
  throw InvalidArgumentError("unknown game kind");
}

}  // namespace pairlens
