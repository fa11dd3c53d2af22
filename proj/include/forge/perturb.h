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

// The eight perturbation strategies, target selection under a rate budget,
// and the edit/ratio bookkeeping shared by all of them. Every function here
// is a pure function of its arguments (the seed included).

#ifndef FORGE_PERTURB_H_
#define FORGE_PERTURB_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/char_kb.h"
#include "forge/error.h"

namespace forge {

enum class PerturbationType {
  kVSim,
  kSplit,
  kTrad,
  kPyInit,
  kPyFull,
  kHomo,
  kShuff,
  kEmoji,
};

inline constexpr std::array<PerturbationType, 8> kAllPerturbationTypes = {
    PerturbationType::kVSim,   PerturbationType::kSplit,
    PerturbationType::kTrad,   PerturbationType::kPyInit,
    PerturbationType::kPyFull, PerturbationType::kHomo,
    PerturbationType::kShuff,  PerturbationType::kEmoji,
};

// Report column name: "VSim", "PY_Init", ...
std::string_view TypeName(PerturbationType t);
// Command-line and record spelling: "vsim", "py_init", ...
std::string_view TypeFlag(PerturbationType t);
// Accepts either spelling, case-insensitively.
std::optional<PerturbationType> ParseType(std::string_view s);
size_t TypeIndex(PerturbationType t);

enum class Label { kToxic, kNonToxic };
std::string_view LabelName(Label l);  // "toxic" / "non_toxic"
std::optional<Label> ParseLabel(std::string_view s);

// Codepoint offsets into the text, end exclusive.
struct ToxicSpan {
  size_t start = 0;
  size_t end = 0;
  std::string surface;

  friend bool operator==(const ToxicSpan&, const ToxicSpan&) = default;
};

// Replaces original codepoints [start, end) with `replacement`.
struct Edit {
  size_t start = 0;
  size_t end = 0;
  std::string replacement;

  friend bool operator==(const Edit&, const Edit&) = default;
};

enum class PinyinCase { kLower, kUpper };

struct PerturbConfig {
  double max_rate = 0.3;
  uint64_t seed = 0;
  PinyinCase pinyin_case = PinyinCase::kLower;
  int shuffle_window = 2;
};

struct PerturbedSample {
  std::string original;
  std::string perturbed;
  PerturbationType type = PerturbationType::kVSim;
  std::vector<Edit> edits;
  // ratio == covered / total, kept as integers so it can be checked exactly.
  int covered = 0;
  int total = 0;
  double ratio = 0.0;
  uint64_t seed = 0;
  Label label = Label::kToxic;
};

class PerturbError : public Error {
 public:
  enum class Kind { kNothingToPerturb, kNoCandidate, kBudgetExceeded };
  PerturbError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view PerturbErrorKindName(PerturbError::Kind kind);

// Result of target selection. `chosen` is sorted; `fallback` lists the
// remaining in-span CJK offsets in ascending order.
struct TargetSelection {
  size_t budget = 0;
  std::vector<size_t> chosen;
  std::vector<size_t> fallback;
};

// Checks 0 <= start < end <= size and, when a surface is given, that it
// equals the slice. Throws ValidationError.
void ValidateSpans(std::u32string_view text,
                   const std::vector<ToxicSpan>& spans);

// Budget k = min(in-span CJK chars, max(1, floor(max_rate * CJK chars))).
// Spans are visited in a seeded order; each contributes one contiguous block
// starting at a seeded position. Throws PerturbError(kNothingToPerturb) when
// the spans hold no CJK character.
TargetSelection SelectTargets(std::u32string_view text,
                              const std::vector<ToxicSpan>& spans,
                              double max_rate, uint64_t seed);

// Validates edits (sorted, in range, non-overlapping) and returns the
// perturbed text. Throws ValidationError.
std::string ApplyEdits(std::u32string_view original,
                       const std::vector<Edit>& edits);

// Covered source CJK chars over all CJK chars; 0 for text without CJK.
// Throws ValidationError on overlapping or out-of-range edits.
double PerturbationRatio(std::u32string_view original,
                         const std::vector<Edit>& edits);
int CoveredCjk(std::u32string_view original, const std::vector<Edit>& edits);

// Runs one strategy. Throws PerturbError, UnknownCharError or
// ValidationError (bad spans).
PerturbedSample Apply(const CharacterKnowledgeBase& kb, PerturbationType type,
                      std::string_view text,
                      const std::vector<ToxicSpan>& spans,
                      const PerturbConfig& config);

}  // namespace forge

#endif  // FORGE_PERTURB_H_
