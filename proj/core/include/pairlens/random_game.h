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

#ifndef PAIRLENS_RANDOM_GAME_H_
#define PAIRLENS_RANDOM_GAME_H_

#include <cstdint>
#include <memory>
#include <string_view>

#include "pairlens/game.h"
#include "pairlens/player_space.h"

namespace pairlens {

enum class GameKind { kTabulated, kTwoAdditive, kFactored };

GameKind ParseGameKind(std::string_view name);
std::string_view GameKindName(GameKind kind);

// Seeded fixtures. All coefficients and table entries are uniform in [-1, 1].
TabulatedGame RandomTabulatedGame(const PlayerSpace& space, std::uint64_t seed);
// Every pair of the space gets a coefficient.
TwoAdditiveGame RandomTwoAdditiveGame(const PlayerSpace& space,
                                      std::uint64_t seed);
// Eight-dimensional towers, logit scale 10.
FactoredGame RandomFactoredGame(const PlayerSpace& space, std::uint64_t seed);

std::unique_ptr<GameOracle> MakeRandomGame(const PlayerSpace& space,
                                           GameKind kind, std::uint64_t seed);

}  // namespace pairlens

#endif  // PAIRLENS_RANDOM_GAME_H_
