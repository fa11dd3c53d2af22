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

#include "forge/parallel.h"

#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

namespace forge {
namespace {

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (int workers : {1, 3, 16}) {
    std::vector<std::atomic<int>> hits(1000);
    ParallelFor(hits.size(), workers, [&](size_t i) { ++hits[i]; });
    for (size_t i = 0; i < hits.size(); ++i) {
      ASSERT_EQ(hits[i].load(), 1) << "workers=" << workers << " i=" << i;
    }
  }
}

TEST(ParallelForTest, SingleWorkerRunsInOrder) {
  std::vector<size_t> order;
  ParallelFor(50, 1, [&](size_t i) { order.push_back(i); });
  ASSERT_EQ(order.size(), 50u);
  for (size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i);
}

TEST(ParallelForTest, EmptyRangeIsANoop) {
  bool called = false;
  ParallelFor(0, 4, [&](size_t) { called = true; });
  EXPECT_FALSE(called);
}

TEST(ParallelForTest, RethrowsAndStopsHandingOutWork) {
  std::atomic<size_t> started{0};
  EXPECT_THROW(ParallelFor(100000, 4,
                           [&](size_t i) {
                             ++started;
                             if (i == 10) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
  EXPECT_LT(started.load(), 100000u);
}

}  // namespace
}  // namespace forge
