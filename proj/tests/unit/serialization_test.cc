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

#include "pairlens/serialization.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "pairlens/errors.h"
#include "pairlens/exact.h"
#include "pairlens/random_game.h"
#include "pairlens/regression.h"
#include "pairlens/sampler.h"

namespace pairlens {
namespace {

void ExpectSameExplanation(const Explanation& a, const Explanation& b) {
  EXPECT_EQ(a.basis(), b.basis());
  EXPECT_EQ(a.kernel().type, b.kernel().type);
  EXPECT_EQ(a.exact(), b.exact());
  EXPECT_EQ(a.BasisVector(), b.BasisVector());
  EXPECT_EQ(a.diagnostics().solver, b.diagnostics().solver);
  EXPECT_EQ(a.diagnostics().sample_count, b.diagnostics().sample_count);
}

TEST(SerializationTest, ExactExplanationRoundTrip) {
  const auto table = RandomTabulatedGame(PlayerSpace(3, 3), 2);
  const auto e = ExactFaithfulInteractions(table, 0.3).ToExplanation();
  const auto json = ExplanationToJson(e);
  EXPECT_EQ(json["schema_version"], 1);
  EXPECT_EQ(json["kind"], "explanation");
  EXPECT_EQ(json["p"], 0.3);
  EXPECT_EQ(json["basis"], "full");
  EXPECT_EQ(json["pairs"].size(), 15u);
  const auto back = ExplanationFromJson(nlohmann::json::parse(json.dump()));
  ExpectSameExplanation(e, back);
  EXPECT_EQ(back.kernel().p, 0.3);
}

TEST(SerializationTest, CliqueAndShapleyRoundTrip) {
  PlayerSpace space(4, 3);
  const auto table = RandomTabulatedGame(space, 3);
  std::vector<Mask> masks;
  for (std::uint64_t k = 0; k < space.num_masks(); ++k) masks.push_back(Mask::FromIndex(space, k));
  const auto basis = BasisSpec::Clique(space, {0, 2, 4, 5, 6});
  const auto e = Fit(masks, table.values(), basis, Kernel::Shapley());
  const auto json = ExplanationToJson(e);
  EXPECT_TRUE(json["p"].is_null());
  EXPECT_EQ(json["kernel"], "shapley");
  EXPECT_EQ(json["clique"], (std::vector<int>{0, 2, 4, 5, 6}));
  const auto back = ExplanationFromJson(json);
  ExpectSameExplanation(e, back);
  EXPECT_EQ(back.basis().clique_members(), basis.clique_members());
}

TEST(SerializationTest, PairsAreSortedWithILessThanJ) {
  PlayerSpace space(2, 2);
  TwoAdditiveGame g(space);
  g.set_pair(3, 1, 0.5);
  g.set_pair(2, 0, -0.5);
  const Explanation e(BasisSpec::Full(space), Kernel::WeightedBanzhaf(0.5), g);
  const auto json = ExplanationToJson(e);
  EXPECT_EQ(json["pairs"], nlohmann::json::parse("[[0,2,-0.5],[1,3,0.5]]"));
}

TEST(SerializationTest, RejectsMalformedExplanations) {
  const auto table = RandomTabulatedGame(PlayerSpace(2, 2), 2);
  const auto good = ExplanationToJson(ExactFaithfulInteractions(table, 0.5).ToExplanation());
  auto wrong_version = good;
  wrong_version["schema_version"] = 99;
  EXPECT_THROW(ExplanationFromJson(wrong_version), IoError);
  auto out_of_basis = good;
  out_of_basis["basis"] = "first-order";
  EXPECT_THROW(ExplanationFromJson(out_of_basis), Error);
  auto bad_player = good;
  bad_player["singles"].push_back({7, 1.0});
  EXPECT_THROW(ExplanationFromJson(bad_player), Error);
  EXPECT_THROW(ExplanationFromJson(nlohmann::json::array()), IoError);
}

TEST(SerializationTest, TabulatedGameRoundTripAndFiles) {
  const auto table = RandomTabulatedGame(PlayerSpace(2, 3), 5);
  const auto json = TabulatedGameToJson(table);
  EXPECT_EQ(json["n_image"], 2);
  EXPECT_EQ(json["values"].size(), 32u);
  const auto path = std::filesystem::temp_directory_path() / "pairlens_serialization_test.json";
  WriteJsonFile(path, json);
  const auto back = TabulatedGameFromJson(ReadJsonFile(path));
  std::filesystem::remove(path);
  EXPECT_EQ(back.values(), table.values());
  EXPECT_EQ(back.space(), table.space());
  EXPECT_THROW(ReadJsonFile("/nonexistent/game.json"), IoError);
  auto short_values = json;
  short_values["values"].erase(0);
  EXPECT_THROW(TabulatedGameFromJson(short_values), Error);
}

}  // namespace
}  // namespace pairlens
