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

// Pointing-game recognition over cross-modal pair interactions.
//
// A pointing spec lists objects, each tying text tokens to image patches:
//
//   {"objects": [{"text_tokens": [0, 1], "image_patches": [4, 5, 11]}, ...]}
//
// `text_tokens` are positions inside the text modality (0..n_text-1), so a
// token t is player n_image + t. `image_patches` are image players
// (0..n_image-1). Within a modality, objects must not share members.

#ifndef PAIRLENS_POINTING_GAME_H_
#define PAIRLENS_POINTING_GAME_H_

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "pairlens/explanation.h"
#include "pairlens/player_space.h"

namespace pairlens {

struct PointingObject {
  std::vector<int> text_tokens;
  std::vector<int> image_patches;
};

struct PointingSpec {
  std::vector<PointingObject> objects;

  // Throws InvalidArgumentError on empty objects, out-of-range members or
  // members shared between objects.
  void Validate(const PlayerSpace& space) const;
};

// Throws IoError on malformed documents.
PointingSpec ParsePointingSpec(const nlohmann::json& json);
PointingSpec LoadPointingSpec(const std::filesystem::path& path);

struct PointingOptions {
  // When every pair entering the score is zero (for instance a first-order
  // explanation), score with the product of single attributions instead of
  // failing.
  bool attribution_product_fallback = false;
};

// Share of correctly signed cross-modal interaction mass. For object k, the
// "in" pairs link its text tokens to its own patches and the "out" pairs link
// them to the patches of every other object. Positive in-pairs and negative
// out-pairs count as correct:
//
//   sum_k |in_k, > 0| + |out_k, < 0|  /  sum_k |in_k| + |out_k|
//
// Patches outside all objects, intra-modal pairs and singles do not enter.
// Throws UndefinedMetricError when the denominator is zero.
double PointingGameRecognition(const Explanation& explanation,
                               const PointingSpec& spec,
                               const PointingOptions& options = {});

}  // namespace pairlens

#endif  // PAIRLENS_POINTING_GAME_H_
