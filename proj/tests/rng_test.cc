// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forge/rng.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"

namespace forge {
namespace {

TEST(SplitMix64Test, MatchesReferenceVectorsForSeedZero) {
  SplitMix64 g(0);
  EXPECT_EQ(g.Next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.Next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(g.Next(), 0x06C45D188009454FULL);
  EXPECT_EQ(g.Next(), 0xF88BB8A8724C81ECULL);
}

TEST(SplitMix64Test, BelowStaysInRange) {
  SplitMix64 g(99);
  for (uint64_t n : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) {
    for (int i = 0; i < 200; ++i) EXPECT_LT(g.Below(n), n);
  }
}

TEST(SplitMix64Test, BelowIsRoughlyUniform) {
  SplitMix64 g(7);
  std::map<uint64_t, int> hist;
  const int kDraws = 60000;
  for (int i = 0; i < kDraws; ++i) ++hist[g.Below(6)];
  ASSERT_EQ(hist.size(), 6u);
  for (const auto& [v, c] : hist) {
    EXPECT_NEAR(c, kDraws / 6, kDraws / 60) << "value " << v;
  }
}

TEST(SplitMix64Test, ShuffleIsAPermutationAndSeedStable) {
  std::vector<int> a(20);
  std::iota(a.begin(), a.end(), 0);
  std::vector<int> b = a;
  SplitMix64 g1(5), g2(5);
  g1.Shuffle(a);
  g2.Shuffle(b);
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Fnv1aTest, KnownValues) {
  EXPECT_EQ(Fnv1a64(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171F73967E8ULL);
}

TEST(DeriveSeedTest, DependsOnEveryInput) {
  const uint64_t base = DeriveSeed(42, "s1", 0);
  EXPECT_EQ(base, DeriveSeed(42, "s1", 0));
  EXPECT_NE(base, DeriveSeed(43, "s1", 0));
  EXPECT_NE(base, DeriveSeed(42, "s2", 0));
  EXPECT_NE(base, DeriveSeed(42, "s1", 1));
}

}  // namespace
}  // namespace forge
