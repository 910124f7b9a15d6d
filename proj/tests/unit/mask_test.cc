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

#include "pairlens/mask.h"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

#include <gtest/gtest.h>

#include "pairlens/errors.h"
#include "pairlens/player_space.h"

namespace pairlens {
namespace {

std::set<int> RandomSubset(std::mt19937_64& rng, int n) {
  std::set<int> s;
  for (int k = 0; k < n; ++k) {
    if (rng() & 1) s.insert(k);
  }
  return s;
}

Mask FromSet(const PlayerSpace& space, const std::set<int>& s) {
  return Mask::FromMembers(space, std::vector<int>(s.begin(), s.end()));
}

TEST(PlayerSpaceTest, RejectsEmptyModalities) {
  EXPECT_THROW(PlayerSpace(0, 3), InvalidArgumentError);
  EXPECT_THROW(PlayerSpace(3, 0), InvalidArgumentError);
}

TEST(PlayerSpaceTest, ModalityRanges) {
  PlayerSpace space(3, 2);
  EXPECT_EQ(space.size(), 5);
  EXPECT_TRUE(space.is_image(2));
  EXPECT_FALSE(space.is_image(3));
  EXPECT_TRUE(space.is_text(3));
  EXPECT_TRUE(space.is_text(4));
  EXPECT_FALSE(space.contains(5));
  EXPECT_EQ(space.first_text(), 3);
}

TEST(PlayerSpaceTest, EnumerationGuardAtTwentyFour) {
  EXPECT_NO_THROW(PlayerSpace(12, 12).CheckEnumerable());
  EXPECT_THROW(PlayerSpace(13, 12).CheckEnumerable(), SpaceTooLargeError);
}

TEST(MaskTest, BitstringPutsPlayerZeroLeftmost) {
  PlayerSpace space(2, 1);
  Mask m = Mask::FromMembers(space, {0, 2});
  EXPECT_EQ(m.ToBitstring(), "101");
  EXPECT_EQ(m.ToIndex(), 0b101u);
  Mask only_first = Mask::FromMembers(space, {0});
  EXPECT_EQ(only_first.ToBitstring(), "100");
  EXPECT_EQ(only_first.ToIndex(), 1u);
  EXPECT_EQ(Mask::FromBitstring(space, "100"), only_first);
}

TEST(MaskTest, BitstringRejectsBadInput) {
  PlayerSpace space(2, 2);
  EXPECT_THROW(Mask::FromBitstring(space, "101"), InvalidMaskError);
  EXPECT_THROW(Mask::FromBitstring(space, "10x1"), InvalidMaskError);
}

TEST(MaskTest, MembersRejectOutOfRange) {
  PlayerSpace space(2, 2);
  EXPECT_THROW(Mask::FromMembers(space, {4}), InvalidMaskError);
  EXPECT_THROW(Mask::FromMembers(space, {-1}), InvalidMaskError);
}

TEST(MaskTest, SetAlgebraAgreesWithStdSet) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n_image = 1 + static_cast<int>(rng() % 8);
    const int n_text = 1 + static_cast<int>(rng() % 8);
    PlayerSpace space(n_image, n_text);
    const int n = space.size();
    const auto a = RandomSubset(rng, n);
    const auto b = RandomSubset(rng, n);
    const Mask ma = FromSet(space, a), mb = FromSet(space, b);

    std::set<int> uni, inter, comp, image_part, text_part;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::inserter(uni, uni.begin()));
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(inter, inter.begin()));
    for (int k = 0; k < n; ++k) {
      if (!a.contains(k)) comp.insert(k);
    }
    for (int k : a) (k < n_image ? image_part : text_part).insert(k);

    EXPECT_EQ(ma | mb, FromSet(space, uni));
    EXPECT_EQ(ma & mb, FromSet(space, inter));
    EXPECT_EQ(ma.Complement(), FromSet(space, comp));
    EXPECT_EQ(ma.ImagePart(), FromSet(space, image_part));
    EXPECT_EQ(ma.TextPart(), FromSet(space, text_part));
    EXPECT_EQ(ma.count(), static_cast<int>(a.size()));
    EXPECT_EQ(ma.count_image(), static_cast<int>(image_part.size()));
    EXPECT_EQ(ma.count_text(), static_cast<int>(text_part.size()));
    EXPECT_EQ(ma.Members(), std::vector<int>(a.begin(), a.end()));
    for (int k = 0; k < n; ++k) EXPECT_EQ(ma.test(k), a.contains(k));
    EXPECT_EQ(Mask::FromBitstring(space, ma.ToBitstring()), ma);
    EXPECT_EQ(Mask::FromIndex(space, ma.ToIndex()), ma);
  }
}

TEST(MaskTest, MultiWordMasks) {
  PlayerSpace space(100, 30);
  Mask m(space);
  m.set(0);
  m.set(63);
  m.set(64);
  m.set(129);
  EXPECT_EQ(m.count(), 4);
  EXPECT_EQ(m.count_image(), 3);
  EXPECT_EQ(m.count_text(), 1);
  EXPECT_EQ(m.Complement().count(), 126);
  EXPECT_EQ(Mask::Full(space).count(), 130);
  EXPECT_EQ(Mask::Full(space).Complement(), Mask::Empty(space));
  EXPECT_EQ(Mask::FromBitstring(space, m.ToBitstring()), m);
  m.reset(64);
  EXPECT_FALSE(m.test(64));
  EXPECT_EQ(m.Members(), (std::vector<int>{0, 63, 129}));
}

TEST(MaskTest, DifferentSpacesDoNotMix) {
  PlayerSpace a(2, 2), b(3, 1);
  EXPECT_THROW(Mask(a) | Mask(b), InvalidMaskError);
  EXPECT_FALSE(Mask(a) == Mask(b));
  EXPECT_THROW(CheckMasks(a, {Mask(a), Mask(b)}), InvalidMaskError);
}

TEST(MaskTest, HashDistinguishesMasks) {
  PlayerSpace space(5, 5);
  std::unordered_set<Mask, MaskHash> all;
  for (std::uint64_t i = 0; i < space.num_masks(); ++i) {
    all.insert(Mask::FromIndex(space, i));
  }
  EXPECT_EQ(all.size(), space.num_masks());
}

}  // namespace
}  // namespace pairlens
