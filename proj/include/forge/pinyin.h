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

#ifndef FORGE_PINYIN_H_
#define FORGE_PINYIN_H_

#include <string>
#include <string_view>

namespace forge {

// One romanized Mandarin syllable. ü is written as ASCII "v" (lv, nve).
struct Syllable {
  std::string initial;  // 0..2 letters: "", "h", "zh", ...
  std::string final;    // 1..4 letters
  int tone = 0;         // 0 = neutral, 1..4

  std::string Toneless() const { return initial + final; }
  // "han4" form, as stored in chars.tsv.
  std::string ToString() const {
    return Toneless() + static_cast<char>('0' + tone);
  }

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

// True when `toneless` is in the standard Mandarin syllable inventory.
bool IsLegalSyllable(std::string_view toneless);

// Parses "han4" / "zi0" / "zi5" (5 is accepted as neutral and stored as 0).
// Throws ValidationError with a human readable reason.
Syllable ParseSyllable(std::string_view token);

// Splits a legal toneless syllable into initial and final; the longest
// initial is taken as long as a non-empty final remains ("ng" -> "" + "ng").
Syllable SplitSyllable(std::string_view toneless, int tone);

}  // namespace forge

#endif  // FORGE_PINYIN_H_
