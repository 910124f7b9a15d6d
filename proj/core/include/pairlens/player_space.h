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

#ifndef PAIRLENS_PLAYER_SPACE_H_
#define PAIRLENS_PLAYER_SPACE_H_

#include <cstdint>
#include <string>

namespace pairlens {

// Largest player count for which anything enumerates all 2^n masks.
inline constexpr int kEnumerationLimit = 24;

// The players of a two-modality game. Image tokens occupy indices
// [0, n_image) and text tokens [n_image, n_image + n_text).
class PlayerSpace {
 public:
  // Throws InvalidArgumentError unless both counts are at least one.
  PlayerSpace(int n_image, int n_text);

  int n_image() const { return n_image_; }
  int n_text() const { return n_text_; }
  int size() const { return n_image_ + n_text_; }

  bool is_image(int player) const { return player >= 0 && player < n_image_; }
  bool is_text(int player) const {
    return player >= n_image_ && player < size();
  }
  bool contains(int player) const { return player >= 0 && player < size(); }
  int first_text() const { return n_image_; }

  bool enumerable() const { return size() <= kEnumerationLimit; }
  // Throws SpaceTooLargeError when !enumerable().
  void CheckEnumerable() const;
  // 2^size(); only meaningful when enumerable().
  std::uint64_t num_masks() const { return std::uint64_t{1} << size(); }

  std::string ToString() const;

  friend bool operator==(const PlayerSpace&, const PlayerSpace&) = default;

 private:
  int n_image_;
  int n_text_;
};

// Throws InvalidArgumentError naming `what` when the spaces differ.
void CheckSameSpace(const PlayerSpace& a, const PlayerSpace& b,
                    const char* what);

}  // namespace pairlens

#endif  // PAIRLENS_PLAYER_SPACE_H_
