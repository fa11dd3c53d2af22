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

#ifndef FORGE_RNG_H_
#define FORGE_RNG_H_

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace forge {

// SplitMix64 (Steele, Lea & Flood 2014). Every random choice in the library
// is drawn from this generator so outputs are reproducible bit-for-bit in any
// language:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Below(n) uses rejection sampling on the low end so it is unbiased.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). n must be positive.
  uint64_t Below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      const uint64_t r = Next();
      if (r >= threshold) return r % n;
    }
  }

  // Fisher-Yates, drawing j = Below(i + 1) for i from the back.
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = Below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t state_;
};

// 64-bit FNV-1a over bytes.
inline uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Per-record seed: one SplitMix64 step over the mixed inputs.
inline uint64_t DeriveSeed(uint64_t seed, std::string_view key,
                           uint64_t salt = 0) {
  SplitMix64 g(seed ^ Fnv1a64(key) ^ (salt * 0xD1B54A32D192ED03ULL));
  return g.Next();
}

}  // namespace forge

#endif  // FORGE_RNG_H_
