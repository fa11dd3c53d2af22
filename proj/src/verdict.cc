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

#include "forge/verdict.h"

#include <algorithm>
#include <array>
#include <vector>

#include "forge/utf8.h"

namespace forge {
namespace {

// Folds fullwidth ASCII variants and the ideographic space to ASCII. The
// mapping is one codepoint to one codepoint so offsets carry over.
char32_t Fold(char32_t c) {
  if (c >= 0xFF01 && c <= 0xFF5E) return c - 0xFEE0;
  if (c == 0x3000) return U' ';
  if (c == U'、') return U',';
  if (c == U'。') return U'.';
  return c;
}

char32_t LowerAscii(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c + 32 : c;
}

bool IsAsciiAlnum(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') ||
         (c >= U'A' && c <= U'Z');
}

bool IsSpace(char32_t c) { return c == U' ' || c == U'\t' || c == U'\r'; }

// Text following a digit that makes it a count, ordinal or percentage
// rather than a label.
constexpr std::array<char32_t, 16> kQuantitySuffix = {
    U'%', U'个', U'步', U'次', U'点', U'号', U'条', U'种',
    U'位', U'年', U'月', U'日', U'天', U'人', U'分', U'句'};

bool StartsWith(const std::u32string& s, size_t pos, std::u32string_view w) {
  if (pos + w.size() > s.size()) return false;
  for (size_t i = 0; i < w.size(); ++i) {
    if (LowerAscii(s[pos + i]) != w[i]) return false;
  }
  return true;
}

// True when the marker at `pos` belongs to an enumeration of choices like
// "0/1", "1 or 0", "0或1", "0、1" or "0-1".
bool IsQuantitySuffix(char32_t c) {
  return std::find(kQuantitySuffix.begin(), kQuantitySuffix.end(), c) !=
         kQuantitySuffix.end();
}

bool InChoicePattern(const std::u32string& s, size_t pos) {
  auto is_binary = [](char32_t c) { return c == U'0' || c == U'1'; };
  static constexpr std::array<std::u32string_view, 8> kJoiners = {
      U"/", U"或", U",", U"-", U"~", U"or", U"|", U"和"};
  // Forward.
  for (auto joiner : kJoiners) {
    size_t i = pos + 1;
    while (i < s.size() && IsSpace(s[i])) ++i;
    if (!StartsWith(s, i, joiner)) continue;
    i += joiner.size();
    while (i < s.size() && IsSpace(s[i])) ++i;
    // The comma joiner only counts when immediately followed by the other
    // digit ("0,1"); "1, toxic" is the normal reply shape.
    if (joiner == U"," && i != pos + 2) continue;
    if (i < s.size() && is_binary(s[i]) &&
        (i + 1 >= s.size() ||
         (!IsAsciiAlnum(s[i + 1]) && !IsQuantitySuffix(s[i + 1])))) {
      return true;
    }
  }
  // Backward.
  for (auto joiner : kJoiners) {
    size_t i = pos;
    while (i > 0 && IsSpace(s[i - 1])) --i;
    if (i < joiner.size()) continue;
    if (!StartsWith(s, i - joiner.size(), joiner)) continue;
    i -= joiner.size();
    if (joiner == U"," && i + 1 != pos) continue;
    while (i > 0 && IsSpace(s[i - 1])) --i;
    if (i > 0 && is_binary(s[i - 1]) &&
        (i < 2 || (!IsAsciiAlnum(s[i - 2]) && s[i - 2] != U'第'))) {
      return true;
    }
  }
  return false;
}

std::optional<size_t> FindMarker(const std::u32string& s) {
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != U'0' && s[i] != U'1') continue;
    const char32_t prev = i > 0 ? s[i - 1] : U' ';
    const char32_t next = i + 1 < s.size() ? s[i + 1] : U' ';
    if (IsAsciiAlnum(prev) || IsAsciiAlnum(next)) continue;
    if (prev == U'.' ||
        (next == U'.' && i + 2 < s.size() && IsAsciiAlnum(s[i + 2]))) {
      continue;  // decimals such as 0.5
    }
    if (prev == U'第') continue;
    if (IsQuantitySuffix(next)) continue;
    // "step 1" / "Step 2" labels.
    size_t j = i;
    while (j > 0 && IsSpace(s[j - 1])) --j;
    if (j >= 4 && StartsWith(s, j - 4, U"step")) continue;
    if (InChoicePattern(s, i)) continue;
    return i;
  }
  return std::nullopt;
}

bool IsQuote(char32_t c) {
  return c == U'"' || c == U'\'' || c == U'“' || c == U'”' || c == U'‘' ||
         c == U'’' || c == U'「' || c == U'」' || c == U'『' || c == U'』' ||
         c == U'《' || c == U'》' || c == U'`';
}

bool IsTrailingPunct(char32_t folded) {
  return folded == U'.' || folded == U',' || folded == U';' ||
         folded == U'!' || folded == U'?' || folded == U':' ||
         folded == U'…' || IsSpace(folded);
}

std::optional<std::string> ExtractAfterKeyword(const std::u32string& orig,
                                               const std::u32string& s,
                                               size_t from) {
  static constexpr std::array<std::u32string_view, 9> kKeywords = {
      U"毒性内容", U"冒犯性内容", U"冒犯内容", U"毒性部分", U"毒性词",
      U"toxic content", U"toxic part", U"toxic portion", U"offensive content"};
  static constexpr std::array<std::u32string_view, 6> kLinks = {
      U"是:", U"为:", U"is:", U"是", U"为", U"is"};
  size_t best = std::u32string::npos;
  size_t value = 0;
  for (auto kw : kKeywords) {
    for (size_t p = from; p + kw.size() <= s.size(); ++p) {
      if (!StartsWith(s, p, kw)) continue;
      size_t i = p + kw.size();
      while (i < s.size() && IsSpace(s[i])) ++i;
      bool linked = false;
      if (i < s.size() && s[i] == U':') {
        ++i;
        linked = true;
      } else {
        for (auto link : kLinks) {
          if (StartsWith(s, i, link)) {
            i += link.size();
            linked = true;
            break;
          }
        }
      }
      if (!linked) continue;
      if (p < best) {
        best = p;
        value = i;
      }
      break;
    }
  }
  if (best == std::u32string::npos) return std::nullopt;
  size_t start = value;
  while (start < s.size() && IsSpace(s[start])) ++start;
  // Quoted value: take up to the closing quote.
  size_t end = start;
  if (start < s.size() && IsQuote(orig[start])) {
    const size_t close = [&] {
      for (size_t i = start + 1; i < s.size(); ++i) {
        if (IsQuote(orig[i]) || s[i] == U'\n') return i;
      }
      return s.size();
    }();
    std::u32string inner = orig.substr(start + 1, close - start - 1);
    if (!inner.empty()) return utf8::Encode(inner);
  }
  while (end < s.size() && s[end] != U'\n' && s[end] != U';' &&
         orig[end] != U'。' && !(s[end] == U'/' && end > start)) {
    ++end;
  }
  while (end > start && (IsTrailingPunct(s[end - 1]) || IsQuote(orig[end - 1]))) {
    --end;
  }
  while (start < end && IsQuote(orig[start])) ++start;
  if (start >= end) return std::nullopt;
  return utf8::Encode(orig.substr(start, end - start));
}

Verdict ParseVerdictImpl(std::string_view raw) {
  Verdict v;
  v.raw = std::string(raw);
  std::u32string orig;
  try {
    orig = utf8::Decode(raw);
  } catch (...) {
    return v;
  }
  std::u32string s(orig.size(), 0);
  std::transform(orig.begin(), orig.end(), s.begin(), Fold);
  const auto marker = FindMarker(s);
  if (!marker) return v;
  if (s[*marker] == U'0') {
    v.label = VerdictLabel::kNonToxic;
    return v;
  }
  v.label = VerdictLabel::kToxic;
  v.extracted = ExtractAfterKeyword(orig, s, *marker + 1);
  return v;
}

struct StageMarker {
  size_t begin;  // marker start
  size_t end;    // marker end (text starts here)
  int stage;
};

std::vector<StageMarker> FindStageMarkers(const std::u32string& s) {
  static constexpr std::array<std::pair<std::u32string_view, int>, 15> kMarks =
      {{{U"【第一步】", 1},
        {U"【第二步】", 2},
        {U"【第三步】", 3},
        {U"【第1步】", 1},
        {U"【第2步】", 2},
        {U"【第3步】", 3},
        {U"[第一步]", 1},
        {U"[第二步]", 2},
        {U"[第三步]", 3},
        {U"[第1步]", 1},
        {U"[第2步]", 2},
        {U"[第3步]", 3},
        {U"[step 1]", 1},
        {U"[step 2]", 2},
        {U"[step 3]", 3}}};
  std::vector<StageMarker> out;
  for (size_t p = 0; p < s.size(); ++p) {
    for (const auto& [mark, stage] : kMarks) {
      if (StartsWith(s, p, mark)) {
        out.push_back({p, p + mark.size(), stage});
        break;
      }
    }
  }
  return out;
}

std::string Trim(const std::u32string& text) {
  size_t a = 0, b = text.size();
  auto blank = [](char32_t c) {
    return c == U' ' || c == U'\n' || c == U'\t' || c == U'\r' || c == 0x3000;
  };
  while (a < b && blank(text[a])) ++a;
  while (b > a && blank(text[b - 1])) --b;
  return utf8::Encode(text.substr(a, b - a));
}

// Drops a short "label：" heading such as "最终判断：" from a stage body.
std::u32string StripHeading(const std::u32string& body) {
  size_t i = 0;
  while (i < body.size() && (body[i] == U' ' || body[i] == 0x3000)) ++i;
  for (size_t j = i; j < body.size() && j < i + 12; ++j) {
    if (body[j] == U'\n') break;
    if (body[j] == U'：' || body[j] == U':') {
      bool has_digit = false;
      for (size_t k = i; k < j; ++k) {
        has_digit |= Fold(body[k]) == U'0' || Fold(body[k]) == U'1';
      }
      if (!has_digit) return body.substr(j + 1);
      break;
    }
  }
  return body;
}

Verdict ParseCacotImpl(std::string_view raw) {
  Verdict v;
  v.raw = std::string(raw);
  std::u32string orig;
  try {
    orig = utf8::Decode(raw);
  } catch (...) {
    return v;
  }
  std::u32string s(orig.size(), 0);
  std::transform(orig.begin(), orig.end(), s.begin(),
                 [](char32_t c) { return LowerAscii(Fold(c)); });
  const auto marks = FindStageMarkers(s);
  CacotStages stages;
  bool has_final = false;
  std::u32string final_body;
  for (size_t i = 0; i < marks.size(); ++i) {
    const size_t stop = i + 1 < marks.size() ? marks[i + 1].begin : orig.size();
    const std::u32string body =
        StripHeading(orig.substr(marks[i].end, stop - marks[i].end));
    switch (marks[i].stage) {
      case 1:
        if (stages.analysis.empty()) stages.analysis = Trim(body);
        break;
      case 2:
        if (stages.recovery.empty()) stages.recovery = Trim(body);
        break;
      case 3:
        if (!has_final) {
          has_final = true;
          final_body = body;
          stages.judgment = Trim(body);
        }
        break;
    }
  }
  v.stages = stages;
  if (!has_final) return v;
  const Verdict final_verdict = ParseVerdictImpl(utf8::Encode(final_body));
  v.label = final_verdict.label;
  v.extracted = final_verdict.extracted;
  return v;
}

}  // namespace

std::string_view VerdictLabelName(VerdictLabel l) {
  switch (l) {
    case VerdictLabel::kNonToxic:
      return "0";
    case VerdictLabel::kToxic:
      return "1";
    case VerdictLabel::kUnparseable:
      return "unparseable";
  }
  return "unparseable";
}

std::optional<VerdictLabel> ParseVerdictLabelName(std::string_view s) {
  if (s == "0") return VerdictLabel::kNonToxic;
  if (s == "1") return VerdictLabel::kToxic;
  if (s == "unparseable") return VerdictLabel::kUnparseable;
  return std::nullopt;
}

Verdict ParseVerdict(std::string_view raw) noexcept {
  try {
    return ParseVerdictImpl(raw);
  } catch (...) {
    Verdict v;
    try {
      v.raw = std::string(raw);
    } catch (...) {
    }
    return v;
  }
}

Verdict ParseCacot(std::string_view raw) noexcept {
  try {
    return ParseCacotImpl(raw);
  } catch (...) {
    Verdict v;
    try {
      v.raw = std::string(raw);
    } catch (...) {
    }
    return v;
  }
}

}  // namespace forge
