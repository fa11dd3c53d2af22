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

#include "forge/perturb.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include "forge/rng.h"
#include "forge/utf8.h"

namespace forge {
namespace {

struct TypeNames {
  PerturbationType type;
  std::string_view name;
  std::string_view flag;
};

constexpr std::array<TypeNames, 8> kTypeNames = {{
    {PerturbationType::kVSim, "VSim", "vsim"},
    {PerturbationType::kSplit, "Split", "split"},
    {PerturbationType::kTrad, "Trad", "trad"},
    {PerturbationType::kPyInit, "PY_Init", "py_init"},
    {PerturbationType::kPyFull, "PY_Full", "py_full"},
    {PerturbationType::kHomo, "Homo", "homo"},
    {PerturbationType::kShuff, "Shuff", "shuff"},
    {PerturbationType::kEmoji, "Emoji", "emoji"},
}};

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

// Salt separating the shuffle stream from the selection stream.
constexpr uint64_t kShuffleSalt = 0x5348554646ULL;

// Largest number of chars the budget admits: floor(rate * n), with a small
// tolerance so 0.3 * 10 is 3 and not 2.
int RateCap(double max_rate, int n) {
  return static_cast<int>(std::floor(max_rate * n + 1e-9));
}

const CharEntry& Lookup(const CharacterKnowledgeBase& kb,
                        std::u32string_view text, size_t offset) {
  const CharEntry* e = kb.Find(text[offset]);
  if (e == nullptr) throw UnknownCharError(text[offset], offset);
  return *e;
}

std::string CaseAdjust(std::string s, PinyinCase c) {
  if (c == PinyinCase::kUpper) {
    for (char& ch : s) ch = static_cast<char>(std::toupper(ch));
  }
  return s;
}

// Maximal runs of consecutive offsets, as [start, end) pairs.
std::vector<std::pair<size_t, size_t>> Runs(const std::vector<size_t>& sorted) {
  std::vector<std::pair<size_t, size_t>> runs;
  for (size_t pos : sorted) {
    if (!runs.empty() && runs.back().second == pos) {
      runs.back().second = pos + 1;
    } else {
      runs.emplace_back(pos, pos + 1);
    }
  }
  return runs;
}

bool IsWordLevel(PerturbationType t) {
  return t == PerturbationType::kPyInit || t == PerturbationType::kPyFull ||
         t == PerturbationType::kHomo || t == PerturbationType::kEmoji;
}

// Edits produced by one strategy on the unit [a, b). An empty result means
// the unit has no candidate.
std::vector<Edit> PerturbUnit(const CharacterKnowledgeBase& kb,
                              PerturbationType type, std::u32string_view text,
                              size_t a, size_t b, const PerturbConfig& config) {
  std::vector<Edit> out;
  switch (type) {
    case PerturbationType::kVSim: {
      Lookup(kb, text, a);
      const auto n = kb.VisualNeighbors(text[a], 1);
      if (!n.empty()) out.push_back({a, b, utf8::Encode(n[0])});
      break;
    }
    case PerturbationType::kSplit: {
      const CharEntry& e = Lookup(kb, text, a);
      if (!e.decomposition.empty()) {
        out.push_back({a, b, utf8::Encode(e.decomposition)});
      }
      break;
    }
    case PerturbationType::kTrad: {
      const CharEntry& e = Lookup(kb, text, a);
      if (e.is_simplified) out.push_back({a, b, utf8::Encode(*e.traditional)});
      break;
    }
    case PerturbationType::kPyInit: {
      std::string initials;
      for (size_t i = a; i < b; ++i) {
        initials.push_back(Lookup(kb, text, i).primary().Toneless()[0]);
      }
      out.push_back({a, b, CaseAdjust(initials, config.pinyin_case)});
      break;
    }
    case PerturbationType::kPyFull: {
      std::string full;
      for (size_t i = a; i < b; ++i) {
        if (i > a) full.push_back(' ');
        full += Lookup(kb, text, i).primary().Toneless();
      }
      out.push_back({a, b, CaseAdjust(full, config.pinyin_case)});
      break;
    }
    case PerturbationType::kHomo: {
      for (size_t i = a; i < b; ++i) Lookup(kb, text, i);
      // Longest window first, scanning left to right.
      size_t i = a;
      while (i < b) {
        bool hit = false;
        for (size_t j = b; j > i; --j) {
          const auto cands = kb.Homophones(text.substr(i, j - i), 1);
          if (!cands.empty()) {
            out.push_back({i, j, utf8::Encode(cands[0])});
            i = j;
            hit = true;
            break;
          }
        }
        if (!hit) ++i;
      }
      break;
    }
    case PerturbationType::kEmoji: {
      const auto whole = kb.EmojiFor(text.substr(a, b - a));
      if (!whole.empty()) {
        out.push_back({a, b, whole[0].emoji});
        break;
      }
      for (size_t i = a; i < b && b - a > 1; ++i) {
        const auto one = kb.EmojiFor(text.substr(i, 1));
        if (!one.empty()) out.push_back({i, i + 1, one[0].emoji});
      }
      break;
    }
    case PerturbationType::kShuff:
      break;  // handled by ShuffleEdits
  }
  return out;
}

int EditLength(const std::vector<Edit>& edits) {
  int n = 0;
  for (const Edit& e : edits) n += static_cast<int>(e.end - e.start);
  return n;
}

std::vector<Edit> SubstitutionEdits(const CharacterKnowledgeBase& kb,
                                    PerturbationType type,
                                    std::u32string_view text,
                                    const TargetSelection& sel,
                                    const PerturbConfig& config) {
  std::vector<Edit> edits;
  std::vector<std::pair<size_t, size_t>> units;
  if (IsWordLevel(type)) {
    units = Runs(sel.chosen);
  } else {
    for (size_t pos : sel.chosen) units.emplace_back(pos, pos + 1);
  }
  for (auto [a, b] : units) {
    auto e = PerturbUnit(kb, type, text, a, b, config);
    edits.insert(edits.end(), e.begin(), e.end());
  }
  int deficit = static_cast<int>(sel.budget) - EditLength(edits);
  for (size_t pos : sel.fallback) {
    if (deficit <= 0) break;
    auto e = PerturbUnit(kb, type, text, pos, pos + 1, config);
    deficit -= EditLength(e);
    edits.insert(edits.end(), e.begin(), e.end());
  }
  std::sort(edits.begin(), edits.end(),
            [](const Edit& x, const Edit& y) { return x.start < y.start; });
  return edits;
}

// Disjoint swaps, each moving a target char to a different CJK char within
// the window. The budget of k chars pays for floor(k / 2) swaps.
std::vector<Edit> ShuffleEdits(std::u32string_view text,
                               const TargetSelection& sel,
                               const PerturbConfig& config) {
  const size_t swaps_wanted = sel.budget / 2;
  if (swaps_wanted == 0) return {};
  SplitMix64 rng(config.seed ^ kShuffleSalt);
  std::vector<size_t> order = sel.chosen;
  rng.Shuffle(order);
  order.insert(order.end(), sel.fallback.begin(), sel.fallback.end());

  std::u32string work(text);
  std::vector<bool> used(text.size(), false);
  const size_t window = static_cast<size_t>(std::max(1, config.shuffle_window));
  size_t swaps = 0;
  for (size_t p : order) {
    if (swaps == swaps_wanted) break;
    if (used[p]) continue;
    std::vector<size_t> partners;
    const size_t lo = p >= window ? p - window : 0;
    const size_t hi = std::min(text.size() - 1, p + window);
    for (size_t q = lo; q <= hi; ++q) {
      if (q != p && !used[q] && utf8::IsCjk(text[q]) && text[q] != text[p]) {
        partners.push_back(q);
      }
    }
    if (partners.empty()) continue;
    const size_t q = partners[rng.Below(partners.size())];
    std::swap(work[p], work[q]);
    used[p] = used[q] = true;
    ++swaps;
  }

  std::vector<Edit> edits;
  for (size_t i = 0; i < text.size(); ++i) {
    if (work[i] == text[i]) continue;
    if (!edits.empty() && edits.back().end == i) {
      edits.back().end = i + 1;
      edits.back().replacement += utf8::Encode(work[i]);
    } else {
      edits.push_back({i, i + 1, utf8::Encode(work[i])});
    }
  }
  return edits;
}

void CheckEdits(std::u32string_view original, const std::vector<Edit>& edits) {
  size_t last_end = 0;
  for (const Edit& e : edits) {
    if (e.start >= e.end || e.end > original.size()) {
      throw ValidationError("edit [" + std::to_string(e.start) + ", " +
                            std::to_string(e.end) + ") is out of range");
    }
    if (e.start < last_end) {
      throw ValidationError("overlapping edits at offset " +
                            std::to_string(e.start));
    }
    last_end = e.end;
  }
}

}  // namespace

std::string_view TypeName(PerturbationType t) {
  return kTypeNames[TypeIndex(t)].name;
}

std::string_view TypeFlag(PerturbationType t) {
  return kTypeNames[TypeIndex(t)].flag;
}

size_t TypeIndex(PerturbationType t) { return static_cast<size_t>(t); }

std::optional<PerturbationType> ParseType(std::string_view s) {
  const std::string lower = Lower(s);
  for (const TypeNames& n : kTypeNames) {
    if (lower == n.flag || lower == Lower(n.name)) return n.type;
  }
  return std::nullopt;
}

std::string_view LabelName(Label l) {
  return l == Label::kToxic ? "toxic" : "non_toxic";
}

std::optional<Label> ParseLabel(std::string_view s) {
  if (s == "toxic") return Label::kToxic;
  if (s == "non_toxic") return Label::kNonToxic;
  return std::nullopt;
}

std::string_view PerturbErrorKindName(PerturbError::Kind kind) {
  switch (kind) {
    case PerturbError::Kind::kNothingToPerturb:
      return "nothing_to_perturb";
    case PerturbError::Kind::kNoCandidate:
      return "no_candidate";
    case PerturbError::Kind::kBudgetExceeded:
      return "budget_exceeded";
  }
  return "unknown";
}

void ValidateSpans(std::u32string_view text,
                   const std::vector<ToxicSpan>& spans) {
  for (const ToxicSpan& s : spans) {
    if (s.start >= s.end || s.end > text.size()) {
      throw ValidationError("span [" + std::to_string(s.start) + ", " +
                            std::to_string(s.end) + ") is invalid for a text of " +
                            std::to_string(text.size()) + " codepoints");
    }
    if (!s.surface.empty() &&
        utf8::Encode(text.substr(s.start, s.end - s.start)) != s.surface) {
      throw ValidationError("span surface '" + s.surface +
                            "' does not match the text at [" +
                            std::to_string(s.start) + ", " +
                            std::to_string(s.end) + ")");
    }
  }
}

TargetSelection SelectTargets(std::u32string_view text,
                              const std::vector<ToxicSpan>& spans,
                              double max_rate, uint64_t seed) {
  if (!(max_rate > 0.0 && max_rate <= 1.0)) {
    throw ValidationError("max_rate must lie in (0, 1]");
  }
  ValidateSpans(text, spans);
  std::set<size_t> in_span;
  std::vector<std::vector<size_t>> per_span;
  for (const ToxicSpan& s : spans) {
    std::vector<size_t> cjk;
    for (size_t i = s.start; i < s.end; ++i) {
      if (utf8::IsCjk(text[i])) cjk.push_back(i);
    }
    in_span.insert(cjk.begin(), cjk.end());
    per_span.push_back(std::move(cjk));
  }
  if (in_span.empty()) {
    throw PerturbError(PerturbError::Kind::kNothingToPerturb,
                       "nothing to perturb");
  }
  const int n = utf8::CountCjk(text);
  TargetSelection sel;
  sel.budget = std::min(in_span.size(),
                        static_cast<size_t>(std::max(1, RateCap(max_rate, n))));

  SplitMix64 rng(seed);
  std::vector<size_t> order(spans.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);
  std::set<size_t> chosen;
  for (size_t idx : order) {
    const size_t remaining = sel.budget - chosen.size();
    if (remaining == 0) break;
    std::vector<size_t> free;
    for (size_t pos : per_span[idx]) {
      if (!chosen.count(pos)) free.push_back(pos);
    }
    if (free.empty()) continue;
    const size_t take = std::min(remaining, free.size());
    const size_t start = rng.Below(free.size() - take + 1);
    chosen.insert(free.begin() + start, free.begin() + start + take);
  }
  sel.chosen.assign(chosen.begin(), chosen.end());
  for (size_t pos : in_span) {
    if (!chosen.count(pos)) sel.fallback.push_back(pos);
  }
  return sel;
}

std::string ApplyEdits(std::u32string_view original,
                       const std::vector<Edit>& edits) {
  CheckEdits(original, edits);
  std::string out;
  size_t pos = 0;
  for (const Edit& e : edits) {
    out += utf8::Encode(original.substr(pos, e.start - pos));
    out += e.replacement;
    pos = e.end;
  }
  out += utf8::Encode(original.substr(pos));
  return out;
}

int CoveredCjk(std::u32string_view original, const std::vector<Edit>& edits) {
  CheckEdits(original, edits);
  int covered = 0;
  for (const Edit& e : edits) {
    covered += utf8::CountCjk(original.substr(e.start, e.end - e.start));
  }
  return covered;
}

double PerturbationRatio(std::u32string_view original,
                         const std::vector<Edit>& edits) {
  const int covered = CoveredCjk(original, edits);
  const int total = utf8::CountCjk(original);
  return total == 0 ? 0.0 : static_cast<double>(covered) / total;
}

PerturbedSample Apply(const CharacterKnowledgeBase& kb, PerturbationType type,
                      std::string_view text,
                      const std::vector<ToxicSpan>& spans,
                      const PerturbConfig& config) {
  const std::u32string cps = utf8::Decode(text);
  const TargetSelection sel =
      SelectTargets(cps, spans, config.max_rate, config.seed);

  PerturbedSample out;
  out.original = std::string(text);
  out.type = type;
  out.seed = config.seed;
  out.label = Label::kToxic;
  out.edits = type == PerturbationType::kShuff
                  ? ShuffleEdits(cps, sel, config)
                  : SubstitutionEdits(kb, type, cps, sel, config);
  if (out.edits.empty()) {
    throw PerturbError(PerturbError::Kind::kNoCandidate,
                       "no in-span character can be perturbed by " +
                           std::string(TypeName(type)));
  }
  out.perturbed = ApplyEdits(cps, out.edits);
  out.covered = CoveredCjk(cps, out.edits);
  out.total = utf8::CountCjk(cps);
  out.ratio = static_cast<double>(out.covered) / out.total;
  if (out.covered > RateCap(config.max_rate, out.total)) {
    throw PerturbError(PerturbError::Kind::kBudgetExceeded,
                       "perturbing " + std::to_string(out.covered) + " of " +
                           std::to_string(out.total) +
                           " CJK characters exceeds the rate cap");
  }
  return out;
}

}  // namespace forge
