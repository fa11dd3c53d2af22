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

// Parsing of free-form model replies into a binary verdict. Both parsers are
// total: any input, including invalid UTF-8, yields a Verdict.

#ifndef FORGE_VERDICT_H_
#define FORGE_VERDICT_H_

#include <optional>
#include <string>
#include <string_view>

namespace forge {

enum class VerdictLabel { kNonToxic, kToxic, kUnparseable };

std::string_view VerdictLabelName(VerdictLabel l);  // "0", "1", "unparseable"
std::optional<VerdictLabel> ParseVerdictLabelName(std::string_view s);

struct CacotStages {
  std::string analysis;  // stage 1: potential toxicity
  std::string recovery;  // stage 2: perturbation recovery
  std::string judgment;  // stage 3: final line
};

struct Verdict {
  VerdictLabel label = VerdictLabel::kUnparseable;
  std::optional<std::string> extracted;  // only with label kToxic
  std::string raw;
  std::optional<CacotStages> stages;
};

// The first unambiguous standalone 0/1 marker decides the label. Fullwidth
// digits and punctuation are folded first; choice patterns such as "0/1" or
// "0或1" are not markers. For label 1 the text after a "toxic content is"
// style keyword becomes `extracted`.
Verdict ParseVerdict(std::string_view raw) noexcept;

// Three-stage reply with 【第一步】/【第二步】/【第三步】 (or [Step N])
// markers; the label comes from stage 3 only.
Verdict ParseCacot(std::string_view raw) noexcept;

}  // namespace forge

#endif  // FORGE_VERDICT_H_
