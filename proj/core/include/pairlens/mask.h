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

#ifndef PAIRLENS_MASK_H_
#define PAIRLENS_MASK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pairlens/player_space.h"

namespace pairlens {

// A subset of active (unmasked) players. Bit k is player k; image players are
// the low bits. The textual form puts player 0 leftmost:
//   space (2, 1), players {0, 2} active  ->  "101".
class Mask {
 public:
  // The empty mask over `space`.
  explicit Mask(const PlayerSpace& space);

  static Mask Empty(const PlayerSpace& space) { return Mask(space); }
  static Mask Full(const PlayerSpace& space);
  // Mask whose bit k equals bit k of `index`. Requires space.size() <= 64.
  static Mask FromIndex(const PlayerSpace& space, std::uint64_t index);
  static Mask FromMembers(const PlayerSpace& space,
                          const std::vector<int>& players);
  // Parses the '0'/'1' form; throws InvalidMaskError on bad width/characters.
  static Mask FromBitstring(const PlayerSpace& space, std::string_view bits);

  const PlayerSpace& space() const { return space_; }
  int width() const { return space_.size(); }

  bool test(int player) const {
    return (words_[static_cast<std::size_t>(player) >> 6] >>
            (static_cast<unsigned>(player) & 63u)) &
           1u;
  }
  void set(int player, bool active = true);
  void reset(int player) { set(player, false); }

  int count() const;
  int count_image() const;
  int count_text() const;
  bool empty() const { return count() == 0; }

  Mask& operator|=(const Mask& other);
  Mask& operator&=(const Mask& other);
  Mask Complement() const;
  // Copies restricted to one modality (the other modality's bits cleared).
  Mask ImagePart() const;
  Mask TextPart() const;

  std::vector<int> Members() const;
  // Requires width() <= 64.
  std::uint64_t ToIndex() const;
  std::string ToBitstring() const;

  std::size_t Hash() const;

  friend bool operator==(const Mask& a, const Mask& b) {
    return a.space_ == b.space_ && a.words_ == b.words_;
  }
  friend Mask operator|(Mask a, const Mask& b) { return a |= b; }
  friend Mask operator&(Mask a, const Mask& b) { return a &= b; }

 private:
  void CheckCompatible(const Mask& other) const;
  void ClearTail();

  PlayerSpace space_;
  std::vector<std::uint64_t> words_;
};

// Throws InvalidMaskError unless every mask was created under `space`.
void CheckMasks(const PlayerSpace& space, const std::vector<Mask>& masks);

struct MaskHash {
  std::size_t operator()(const Mask& mask) const { return mask.Hash(); }
};

}  // namespace pairlens

#endif  // PAIRLENS_MASK_H_
