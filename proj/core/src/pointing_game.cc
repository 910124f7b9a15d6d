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

#include "pairlens/pointing_game.h"

#include <cmath>
#include <string>
#include <vector>

#include "pairlens/errors.h"
#include "pairlens/serialization.h"

namespace pairlens {
namespace {

void CheckMembers(const std::vector<int>& members, int limit,
                  std::vector<char>& taken, const char* what, std::size_t k) {
  if (members.empty()) {
    throw InvalidArgumentError("pointing object " + std::to_string(k) +
                               " has no " + what);
  }
  for (const int m : members) {
    if (m < 0 || m >= limit) {
      throw InvalidArgumentError(std::string(what) + " index " +
                                 std::to_string(m) + " of object " +
                                 std::to_string(k) + " is outside [0, " +
                                 std::to_string(limit) + ")");
    }
    auto& slot = taken[static_cast<std::size_t>(m)];
    if (slot) {
      throw InvalidArgumentError(std::string(what) + " index " +
                                 std::to_string(m) +
                                 " belongs to more than one object");
    }
    slot = 1;
  }
}

struct Mass {
  double correct = 0.0;
  double total = 0.0;

  void Add(double value, bool in_object) {
    total += std::abs(value);
    if (in_object ? value > 0.0 : value < 0.0) correct += std::abs(value);
  }
};

template <typename PairValue>
Mass Accumulate(const Explanation& explanation, const PointingSpec& spec,
                PairValue pair_value) {
  const int first_text = explanation.space().first_text();
  Mass mass;
  for (std::size_t k = 0; k < spec.objects.size(); ++k) {
    for (const int token : spec.objects[k].text_tokens) {
      const int t = first_text + token;
      for (std::size_t l = 0; l < spec.objects.size(); ++l) {
        for (const int patch : spec.objects[l].image_patches) {
          mass.Add(pair_value(patch, t), k == l);
        }
      }
    }
  }
  return mass;
}

}  // namespace

void PointingSpec::Validate(const PlayerSpace& space) const {
  if (objects.empty()) {
    throw InvalidArgumentError("pointing spec lists no objects");
  }
  std::vector<char> tokens(static_cast<std::size_t>(space.n_text()), 0);
  std::vector<char> patches(static_cast<std::size_t>(space.n_image()), 0);
  for (std::size_t k = 0; k < objects.size(); ++k) {
    CheckMembers(objects[k].text_tokens, space.n_text(), tokens, "text token",
                 k);
    CheckMembers(objects[k].image_patches, space.n_image(), patches,
                 "image patch", k);
  }
}

PointingSpec ParsePointingSpec(const nlohmann::json& json) {
  try {
    PointingSpec spec;
    for (const auto& object : json.at("objects")) {
      spec.objects.push_back(
          {object.at("text_tokens").get<std::vector<int>>(),
           object.at("image_patches").get<std::vector<int>>()});
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed pointing spec: ") + e.what());
  }
}

PointingSpec LoadPointingSpec(const std::filesystem::path& path) {
  return ParsePointingSpec(ReadJsonFile(path));
}

double PointingGameRecognition(const Explanation& explanation,
                               const PointingSpec& spec,
                               const PointingOptions& options) {
  spec.Validate(explanation.space());
  Mass mass = Accumulate(explanation, spec, [&](int i, int j) {
    return explanation.pair(i, j);
  });
  if (mass.total == 0.0 && options.attribution_product_fallback) {
    mass = Accumulate(explanation, spec, [&](int i, int j) {
      return explanation.single(i) * explanation.single(j);
    });
  }
  if (mass.total == 0.0) {
    throw UndefinedMetricError(
        "pointing-game recognition is undefined: every cross-modal pair in the "
        "spec has zero interaction");
  }
  return mass.correct / mass.total;
}

}  // namespace pairlens
