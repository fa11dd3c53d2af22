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

#ifndef FORGE_EXTRACT_H_
#define FORGE_EXTRACT_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/chat.h"
#include "forge/perturb.h"
#include "forge/prompts.h"

namespace forge {

enum class ExtractionSource { kModel, kLexicon, kGold };
std::string_view ExtractionSourceName(ExtractionSource s);

struct ExtractionResult {
  std::string id;
  std::string text;
  std::vector<ToxicSpan> spans;  // sorted, non-overlapping
  ExtractionSource source = ExtractionSource::kLexicon;
  std::vector<std::string> warnings;
};

// Toxic terms with optional category tags; one "term[\tcategory]" per line,
// '#' comments allowed.
class ToxicLexicon {
 public:
  static ToxicLexicon Load(const std::filesystem::path& path);
  // Throws ValidationError on an empty term.
  static ToxicLexicon FromTerms(
      const std::vector<std::pair<std::string, std::string>>& terms);

  // Non-overlapping matches, scanning left to right and taking the longest
  // term at each position.
  std::vector<ToxicSpan> Match(std::u32string_view text) const;

  size_t size() const { return terms_.size(); }
  const std::string* CategoryOf(const std::u32string& term) const;

 private:
  std::map<std::u32string, std::string> terms_;
  size_t max_len_ = 0;
};

struct SampleText {
  std::string id;
  std::string text;
};

// Throws ValidationError for empty text.
ExtractionResult ExtractWithLexicon(const ToxicLexicon& lexicon,
                                    const SampleText& sample);

// Order-preserving batch; the OpenMP and serial versions agree exactly.
std::vector<ExtractionResult> ExtractBatch(const ToxicLexicon& lexicon,
                                           const std::vector<SampleText>& in);
std::vector<ExtractionResult> ExtractBatchSerial(
    const ToxicLexicon& lexicon, const std::vector<SampleText>& in);

// Surfaces listed in an extraction reply: one per line (or separated by
// commas), with bullets, numbering and quotes removed. "无" / "none" means
// no surfaces.
std::vector<std::string> ParseExtractionReply(std::string_view reply);

// Places each surface at its first verbatim occurrence. Surfaces that do not
// occur, or that overlap an earlier placement, are dropped with a warning.
ExtractionResult AlignSurfaces(const SampleText& sample,
                               const std::vector<std::string>& surfaces,
                               ExtractionSource source);

// Renders the extraction template, queries the model and aligns the reply.
ExtractionResult ExtractWithModel(ChatClient& client,
                                  const EndpointConfig& endpoint,
                                  const PromptTemplate& tmpl,
                                  const SampleText& sample,
                                  const GenConfig& gen = {});

struct AccuracyCount {
  size_t correct = 0;
  size_t total = 0;
  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  }
};

// A sample is correct iff its predicted span set equals the gold span set
// (offsets only). Results and gold must cover the same ids; throws
// ValidationError otherwise.
AccuracyCount ExtractionAccuracy(const std::vector<ExtractionResult>& results,
                                 const std::vector<ExtractionResult>& gold);

}  // namespace forge

#endif  // FORGE_EXTRACT_H_
