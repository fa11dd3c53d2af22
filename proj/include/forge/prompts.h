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

// Detection and extraction prompt templates, loaded from a catalog
// directory, and rendering of a template plus one sentence into chat
// messages.

#ifndef FORGE_PROMPTS_H_
#define FORGE_PROMPTS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/perturb.h"

namespace forge {

struct Message {
  std::string role;  // "system", "user" or "assistant"
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class PromptLanguage { kZh, kEn };
enum class ReplyParser { kVerdict, kCacot, kExtraction };

struct PromptTemplate {
  std::string id;
  std::string text;  // byte-identical to the catalog file
  PromptLanguage language = PromptLanguage::kZh;
  ReplyParser parser = ReplyParser::kVerdict;
  std::string origin;  // "transcribed" or "reconstructed"
  // Placeholder line replaced by in-context examples (CACOT only).
  std::optional<std::string> example_slot;
};

class PromptCatalog {
 public:
  // Reads catalog.json and one <ID>.txt per entry. Throws Error.
  static PromptCatalog Load(const std::filesystem::path& dir);

  // Throws Error("unknown template id ...").
  const PromptTemplate& Get(std::string_view id) const;
  std::vector<std::string> ids() const;
  // SHA-256 over all template files, in id order.
  std::string Checksum() const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

struct IclExample {
  std::string text;
  int label = 0;  // 0 or 1
  std::string analysis;
  PerturbationType type = PerturbationType::kVSim;
};

inline constexpr size_t kIclExamplesPerType = 10;

// JSON Lines with fields text, label (0/1), analysis, type. Throws
// ValidationError naming the line.
std::vector<IclExample> LoadIclExamples(const std::filesystem::path& path);

// Throws ValidationError unless every requested type has exactly ten
// examples. With no requested types, the types present in `examples` are
// checked.
void ValidateIclBlock(const std::vector<IclExample>& examples,
                      const std::vector<PerturbationType>& requested = {});

// System message = template text (with the example slot filled or removed);
// user message = optional example block followed by the sentence.
// Throws ValidationError for an empty sentence.
std::vector<Message> RenderPrompt(const PromptTemplate& tmpl,
                                  std::string_view sentence,
                                  const std::vector<IclExample>* icl = nullptr);

// "句子：..." or "Sentence: ..." depending on the template language.
std::string QueryLine(const PromptTemplate& tmpl, std::string_view sentence);

}  // namespace forge

#endif  // FORGE_PROMPTS_H_
