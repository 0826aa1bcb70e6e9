/*
 * Copyright 2026 The Bagforest Authors.
 *
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

#ifndef BAGFOREST_RANDOM_H_
#define BAGFOREST_RANDOM_H_

#include <cstdint>
#include <span>
#include <utility>

namespace bagforest {

// Counter-based random stream. The i-th draw is a pure function of
// (key, i), so streams can be split by index and consumed on any thread
// without changing their output.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : key_(Mix(seed ^ kSeedSalt)) {}

  // Independent child stream identified by `index`.
  RandomStream Split(uint64_t index) const {
    RandomStream child(0);
    child.key_ = Mix(key_ ^ Mix(index + kGamma));
    return child;
  }

  uint64_t NextU64() {
    ++counter_;
    return Mix(key_ + counter_ * kGamma);
  }

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t UniformBelow(uint64_t bound) {
    // Rejection on the top of the range keeps the draw exactly uniform.
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    uint64_t x;
    do {
      x = NextU64();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform real in [0, 1) with 53 random bits.
  double UniformReal() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformBelow(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  uint64_t draws() const { return counter_; }

 private:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr uint64_t kSeedSalt = 0x5851F42D4C957F2DULL;

  // SplitMix64 finalizer.
  static uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace bagforest

#endif  // BAGFOREST_RANDOM_H_
