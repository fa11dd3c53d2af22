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

#ifndef FORGE_UTF8_H_
#define FORGE_UTF8_H_

#include <string>
#include <string_view>

namespace forge::utf8 {

// Decodes UTF-8 into codepoints. Throws forge::ValidationError on malformed
// input (overlong forms, surrogates and truncated sequences included).
std::u32string Decode(std::string_view text);

std::string Encode(std::u32string_view codepoints);
std::string Encode(char32_t codepoint);

// True for ideographs and radical forms: CJK Unified Ideographs and
// extensions, CJK Compatibility Ideographs, CJK Radicals Supplement and
// Kangxi Radicals.
bool IsCjk(char32_t cp);

// Number of IsCjk codepoints in `text`.
int CountCjk(std::u32string_view text);

// True for ASCII/CJK/fullwidth punctuation and whitespace.
bool IsPunctOrSpace(char32_t cp);

}  // namespace forge::utf8

#endif  // FORGE_UTF8_H_
