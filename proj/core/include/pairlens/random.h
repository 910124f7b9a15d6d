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

#ifndef PAIRLENS_RANDOM_H_
#define PAIRLENS_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace pairlens {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output is
// a pure function of (key, counter), so streams are reproducible across
// platforms and compilers. Only bit-level conversions are used for floating
// point draws; std::*_distribution is deliberately avoided because its output
// is implementation-defined.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  // `stream` occupies the two high counter words, the block index the low two.
  explicit Philox4x32(std::uint64_t key, std::uint64_t stream = 0);

  // One application of the 10-round bijection.
  static Counter Block(Counter counter, Key key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();
  std::uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double NextUniform();
  // Uniform in [lo, hi).
  double NextUniform(double lo, double hi) {
    return lo + (hi - lo) * NextUniform();
  }
  bool NextBernoulli(double p) { return NextUniform() < p; }
  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t NextBelow(std::uint64_t bound);
  // Standard normal via Box-Muller on two uniforms.
  double NextGaussian();

  // Number of 128-bit blocks consumed so far.
  std::uint64_t blocks() const { return block_; }

 private:
  void Refill();

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Counter buffer_{};
  int next_ = 4;
};

std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t Fnv1a64(std::string_view text);

// Sub-seed derivation by labeled hashing:
//   DeriveSeed(seed, label) = SplitMix64(seed ^ Fnv1a64(label)).
// Every random consumer in the library takes its stream from a distinct label.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

inline Philox4x32 MakeStream(std::uint64_t seed, std::string_view label) {
  return Philox4x32(DeriveSeed(seed, label));
}

}  // namespace pairlens

#endif  // PAIRLENS_RANDOM_H_
