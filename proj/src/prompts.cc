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

#include "forge/prompts.h"

#include <fstream>
#include <sstream>

#include "forge/error.h"
#include "forge/hash.h"
#include "json.hpp"

namespace forge {
namespace {

using nlohmann::json;

std::string FormatExample(const IclExample& ex, PromptLanguage lang) {
  std::ostringstream out;
  if (lang == PromptLanguage::kZh) {
    out << "句子：" << ex.text << "\n标签：" << ex.label << "\n分析："
        << ex.analysis << "\n";
  } else {
    out << "Sentence: " << ex.text << "\nLabel: " << ex.label
        << "\nAnalysis: " << ex.analysis << "\n";
  }
  return out.str();
}

std::string FormatExamples(const std::vector<IclExample>& icl,
                           PromptLanguage lang) {
  std::string out;
  for (size_t i = 0; i < icl.size(); ++i) {
    if (i > 0) out += "\n";
    out += FormatExample(icl[i], lang);
  }
  return out;
}

// Replaces the slot line with `examples`, or drops the slot line together
// with the header line above it when there are none.
std::string FillSlot(const std::string& text, const std::string& slot,
                     const std::vector<IclExample>* icl,
                     PromptLanguage lang) {
  const size_t pos = text.find(slot);
  if (pos == std::string::npos) return text;
  size_t slot_end = text.find('\n', pos);
  slot_end = slot_end == std::string::npos ? text.size() : slot_end + 1;
  if (icl != nullptr && !icl->empty()) {
    return text.substr(0, pos) + FormatExamples(*icl, lang) +
           text.substr(slot_end);
  }
  // Walk back over blank lines to the header line.
  size_t cut = pos;
  while (cut > 0 && text[cut - 1] == '\n') --cut;
  const size_t header = text.rfind('\n', cut == 0 ? 0 : cut - 1);
  cut = header == std::string::npos ? 0 : header + 1;
  std::string out = text.substr(0, cut) + text.substr(slot_end);
  while (out.size() >= 2 && out[out.size() - 1] == '\n' &&
         out[out.size() - 2] == '\n') {
    out.pop_back();
  }
  return out;
}

}  // namespace

PromptCatalog PromptCatalog::Load(const std::filesystem::path& dir) {
  json meta;
  try {
    meta = json::parse(ReadFile(dir / "catalog.json"));
  } catch (const json::exception& e) {
    throw Error("malformed prompt catalog: " + std::string(e.what()));
  }
  PromptCatalog catalog;
  for (const auto& [id, m] : meta.items()) {
    PromptTemplate t;
    t.id = id;
    t.text = ReadFile(dir / (id + ".txt"));
    const std::string lang = m.value("language", "zh");
    t.language = lang == "en" ? PromptLanguage::kEn : PromptLanguage::kZh;
    const std::string parser = m.value("parser", "verdict");
    if (parser == "cacot") {
      t.parser = ReplyParser::kCacot;
    } else if (parser == "extraction") {
      t.parser = ReplyParser::kExtraction;
    } else if (parser == "verdict") {
      t.parser = ReplyParser::kVerdict;
    } else {
      throw Error("template " + id + " has unknown parser '" + parser + "'");
    }
    t.origin = m.value("origin", "transcribed");
    if (m.contains("example_slot")) {
      t.example_slot = m["example_slot"].get<std::string>();
    }
    catalog.templates_[id] = std::move(t);
  }
  return catalog;
}

const PromptTemplate& PromptCatalog::Get(std::string_view id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw Error("unknown template id '" + std::string(id) + "'");
  }
  return it->second;
}

std::vector<std::string> PromptCatalog::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, t] : templates_) out.push_back(id);
  return out;
}

std::string PromptCatalog::Checksum() const {
  std::string all;
  for (const auto& [id, t] : templates_) {
    all += id + "\n" + Sha256Hex(t.text) + "\n";
  }
  return Sha256Hex(all);
}

std::vector<IclExample> LoadIclExamples(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<IclExample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.filename().string() + ":" +
                              std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      IclExample ex;
      ex.text = j.at("text").get<std::string>();
      ex.label = j.at("label").get<int>();
      ex.analysis = j.at("analysis").get<std::string>();
      const auto type = ParseType(j.at("type").get<std::string>());
      if (!type) throw ValidationError("unknown perturbation type");
      if (ex.label != 0 && ex.label != 1) {
        throw ValidationError("label must be 0 or 1");
      }
      if (ex.text.empty()) throw ValidationError("empty text");
      ex.type = *type;
      out.push_back(std::move(ex));
    } catch (const json::exception& e) {
      throw ValidationError(where + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return out;
}

void ValidateIclBlock(const std::vector<IclExample>& examples,
                      const std::vector<PerturbationType>& requested) {
  std::map<PerturbationType, size_t> counts;
  for (const IclExample& ex : examples) ++counts[ex.type];
  std::vector<PerturbationType> check = requested;
  if (check.empty()) {
    for (const auto& [t, n] : counts) check.push_back(t);
  }
  if (check.empty()) throw ValidationError("in-context block is empty");
  for (PerturbationType t : check) {
    const size_t n = counts.count(t) ? counts[t] : 0;
    if (n != kIclExamplesPerType) {
      throw ValidationError("in-context block has " + std::to_string(n) +
                            " examples of type " + std::string(TypeName(t)) +
                            ", expected " +
                            std::to_string(kIclExamplesPerType));
    }
  }
}

std::string QueryLine(const PromptTemplate& tmpl, std::string_view sentence) {
  return (tmpl.language == PromptLanguage::kZh ? "句子：" : "Sentence: ") +
         std::string(sentence);
}

std::vector<Message> RenderPrompt(const PromptTemplate& tmpl,
                                  std::string_view sentence,
                                  const std::vector<IclExample>* icl) {
  if (sentence.empty()) throw ValidationError("empty sample");
  std::string system = tmpl.text;
  std::string user;
  if (tmpl.example_slot) {
    system = FillSlot(system, *tmpl.example_slot, icl, tmpl.language);
  } else if (icl != nullptr && !icl->empty()) {
    user = (tmpl.language == PromptLanguage::kZh ? "以下是若干示例：\n\n"
                                                 : "Here are some examples:\n\n") +
           FormatExamples(*icl, tmpl.language) + "\n";
  }
  user += QueryLine(tmpl, sentence);
  return {{"system", system}, {"user", user}};
}

}  // namespace forge
