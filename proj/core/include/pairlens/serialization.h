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

// JSON forms of explanations and tabulated games.
//
// Explanation (schema_version 1):
//   {"schema_version": 1, "kind": "explanation",
//    "space": {"n_image": int, "n_text": int},
//    "p": float | null,            // null for Shapley-kernel fits
//    "kernel": "wbanzhaf" | "shapley",
//    "basis": "full" | "cross-modal" | "first-order" | "clique:K",
//    "clique": [int, ...],         // clique bases only
//    "exact": bool,
//    "e0": float,
//    "singles": [[i, v], ...],
//    "pairs": [[i, j, v], ...],    // i < j, sorted
//    "diagnostics": {...}}
//
// Tabulated game:
//   {"n_image": int, "n_text": int, "values": [2^n floats in mask-bit order]}

#ifndef PAIRLENS_SERIALIZATION_H_
#define PAIRLENS_SERIALIZATION_H_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pairlens/explanation.h"
#include "pairlens/game.h"

namespace pairlens {

inline constexpr int kExplanationSchemaVersion = 1;

nlohmann::json ExplanationToJson(const Explanation& explanation);
// Throws IoError on schema violations.
Explanation ExplanationFromJson(const nlohmann::json& json);

nlohmann::json TabulatedGameToJson(const TabulatedGame& game);
TabulatedGame TabulatedGameFromJson(const nlohmann::json& json);

// File helpers; throw IoError when the file cannot be read or parsed.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::json& json);

}  // namespace pairlens

#endif  // PAIRLENS_SERIALIZATION_H_
