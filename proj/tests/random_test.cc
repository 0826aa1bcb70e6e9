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

#include "bagforest/random.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"

namespace bagforest {
namespace {

TEST(RandomStream, SameSeedSameSequence) {
  RandomStream a(7);
  RandomStream b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RandomStream, SplitStreamsAreIndependentOfDrawOrder) {
  const RandomStream root(42);
  RandomStream first = root.Split(3);
  const uint64_t expected = first.NextU64();

  RandomStream other = root.Split(1);
  for (int i = 0; i < 10; ++i) other.NextU64();
  RandomStream again = root.Split(3);
  EXPECT_EQ(again.NextU64(), expected);
  EXPECT_NE(root.Split(3).NextU64(), root.Split(4).NextU64());
}

TEST(RandomStream, UniformBelowStaysInRange) {
  RandomStream rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const uint64_t v = rng.UniformBelow(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  EXPECT_EQ(rng.UniformBelow(1), 0u);
}

TEST(RandomStream, UniformRealInUnitInterval) {
  RandomStream rng(9);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.UniformReal();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(RandomStream, ShuffleIsAPermutation) {
  RandomStream rng(5);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.Shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

}  // namespace
}  // namespace bagforest
