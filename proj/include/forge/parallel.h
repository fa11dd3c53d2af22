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

// Bounded worker pool over an index range.

#ifndef FORGE_PARALLEL_H_
#define FORGE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace forge {

// Calls fn(i) for every i in [0, n) on at most `workers` threads. Indices
// are handed out in increasing order. If any call throws, no new indices are
// started and the first exception is rethrown after all threads finish.
void ParallelFor(size_t n, int workers, const std::function<void(size_t)>& fn);

}  // namespace forge

#endif  // FORGE_PARALLEL_H_
