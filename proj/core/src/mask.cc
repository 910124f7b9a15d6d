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

#include <bit>
#include <string>

#include "pairlens/errors.h"
#include "pairlens/player_space.h"
#include "pairlens/random.h"

namespace pairlens {

PlayerSpace::PlayerSpace(int n_image, int n_text)
    : n_image_(n_image), n_text_(n_text) {
  if (n_image < 1 || n_text < 1) {
    throw InvalidArgumentError(
        "a player space needs at least one image and one text token, got (" +
        std::to_string(n_image) + ", " + std::to_string(n_text) + ")");
  }
}

void PlayerSpace::CheckEnumerable() const {
  if (!enumerable()) throw SpaceTooLargeError(size(), kEnumerationLimit);
}

std::string PlayerSpace::ToString() const {
  return "(n_image=" + std::to_string(n_image_) +
         ", n_text=" + std::to_string(n_text_) + ")";
}

void CheckSameSpace(const PlayerSpace& a, const PlayerSpace& b,
                    const char* what) {
  if (a != b) {
    throw InvalidArgumentError(std::string(what) + ": player space " +
                               a.ToString() + " does not match " +
                               b.ToString());
  }
}

namespace {

std::size_t NumWords(int width) {
  return (static_cast<std::size_t>(width) + 63) / 64;
}

}  // namespace

Mask::Mask(const PlayerSpace& space)
    : space_(space), words_(NumWords(space.size()), 0) {}

Mask Mask::Full(const PlayerSpace& space) {
  Mask mask(space);
  for (auto& word : mask.words_) word = ~std::uint64_t{0};
  mask.ClearTail();
  return mask;
}

Mask Mask::FromIndex(const PlayerSpace& space, std::uint64_t index) {
  if (space.size() > 64) {
    throw InvalidMaskError("FromIndex requires at most 64 players, got " +
                           std::to_string(space.size()));
  }
  Mask mask(space);
  mask.words_[0] = index;
  mask.ClearTail();
  return mask;
}

Mask Mask::FromMembers(const PlayerSpace& space,
                       const std::vector<int>& players) {
  Mask mask(space);
  for (int player : players) {
    if (!space.contains(player)) {
      throw InvalidMaskError("player " + std::to_string(player) +
                             " outside space " + space.ToString());
    }
    mask.set(player);
  }
  return mask;
}

Mask Mask::FromBitstring(const PlayerSpace& space, std::string_view bits) {
  if (bits.size() != static_cast<std::size_t>(space.size())) {
    throw InvalidMaskError("bitstring of length " +
                           std::to_string(bits.size()) + " for " +
                           std::to_string(space.size()) + " players");
  }
  Mask mask(space);
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      mask.set(static_cast<int>(k));
    } else if (bits[k] != '0') {
      throw InvalidMaskError("bitstring contains '" + std::string(1, bits[k]) +
                             "' at position " + std::to_string(k));
    }
  }
  return mask;
}

void Mask::set(int player, bool active) {
  const auto word = static_cast<std::size_t>(player) >> 6;
  const auto bit = std::uint64_t{1} << (static_cast<unsigned>(player) & 63u);
  if (active) {
    words_[word] |= bit;
  } else {
    words_[word] &= ~bit;
  }
}

int Mask::count() const {
  int total = 0;
  for (auto word : words_) total += std::popcount(word);
  return total;
}

int Mask::count_image() const { return ImagePart().count(); }

int Mask::count_text() const { return TextPart().count(); }

void Mask::CheckCompatible(const Mask& other) const {
  if (space_ != other.space_) {
    throw InvalidMaskError("mask spaces differ: " + space_.ToString() +
                           " vs " + other.space_.ToString());
  }
}

void Mask::ClearTail() {
  const unsigned used = static_cast<unsigned>(space_.size()) & 63u;
  if (used != 0) words_.back() &= (std::uint64_t{1} << used) - 1;
}

Mask& Mask::operator|=(const Mask& other) {
  CheckCompatible(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

Mask& Mask::operator&=(const Mask& other) {
  CheckCompatible(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

Mask Mask::Complement() const {
  Mask result(*this);
  for (auto& word : result.words_) word = ~word;
  result.ClearTail();
  return result;
}

Mask Mask::ImagePart() const {
  Mask result(*this);
  for (int k = space_.first_text(); k < space_.size(); ++k) result.reset(k);
  return result;
}

Mask Mask::TextPart() const {
  Mask result(*this);
  for (int k = 0; k < space_.first_text(); ++k) result.reset(k);
  return result;
}

std::vector<int> Mask::Members() const {
  std::vector<int> members;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    auto word = words_[w];
    while (word != 0) {
      members.push_back(static_cast<int>(w * 64) + std::countr_zero(word));
      word &= word - 1;
    }
  }
  return members;
}

std::uint64_t Mask::ToIndex() const {
  if (space_.size() > 64) {
    throw InvalidMaskError("ToIndex requires at most 64 players");
  }
  return words_[0];
}

std::string Mask::ToBitstring() const {
  std::string bits(static_cast<std::size_t>(space_.size()), '0');
  for (int k = 0; k < space_.size(); ++k) {
    if (test(k)) bits[static_cast<std::size_t>(k)] = '1';
  }
  return bits;
}

std::size_t Mask::Hash() const {
  std::uint64_t h = static_cast<std::uint64_t>(space_.size());
  for (auto word : words_) h = SplitMix64(h ^ word);
  return static_cast<std::size_t>(h);
}

void CheckMasks(const PlayerSpace& space, const std::vector<Mask>& masks) {
  for (std::size_t k = 0; k < masks.size(); ++k) {
    if (masks[k].space() != space) {
      throw InvalidMaskError("mask " + std::to_string(k) + " has width " +
                             std::to_string(masks[k].width()) +
                             " under space " + masks[k].space().ToString() +
                             ", expected " + space.ToString());
    }
  }
}

}  // namespace pairlens
