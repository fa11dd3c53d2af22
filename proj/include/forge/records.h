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

// On-disk record types shared by the dataset, evaluation and report stages,
// with their JSON Lines encodings.

#ifndef FORGE_RECORDS_H_
#define FORGE_RECORDS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forge/perturb.h"
#include "forge/verdict.h"
#include "json.hpp"

namespace forge {

using OrderedJson = nlohmann::ordered_json;

struct CorpusRecord {
  std::string id;
  std::string text;
  Label label = Label::kToxic;
  std::string source_tag;
};

// Edit plus the source text it replaced, as stored in record files.
struct RecordEdit {
  size_t start = 0;
  size_t end = 0;
  std::string source;
  std::string replacement;

  friend bool operator==(const RecordEdit&, const RecordEdit&) = default;
};

struct DatasetRecord {
  std::string id;
  std::string text;
  Label label = Label::kToxic;
  std::optional<PerturbationType> type;  // absent for base records
  std::string original_id;
  std::vector<RecordEdit> edits;
  double ratio = 0.0;
  uint64_t seed = 0;
};

struct SpanRecord {
  std::string id;
  std::string text;
  std::string source;  // "lexicon" / "model" / "gold"
  std::vector<ToxicSpan> spans;
};

struct ResultRecord {
  std::string sample_id;
  std::string original_id;
  std::optional<PerturbationType> type;
  Label gold_label = Label::kToxic;
  VerdictLabel label = VerdictLabel::kUnparseable;
  std::optional<std::string> extracted;
  std::string raw;
  std::string model;
  std::string template_id;
  std::string gold_entity;
  std::vector<RecordEdit> perturbed_forms;
  std::optional<CacotStages> stages;
};

OrderedJson ToJson(const CorpusRecord& r);
OrderedJson ToJson(const DatasetRecord& r);
OrderedJson ToJson(const SpanRecord& r);
OrderedJson ToJson(const ResultRecord& r);

// Parsers throw ValidationError describing the offending field.
CorpusRecord CorpusRecordFromJson(const OrderedJson& j);
DatasetRecord DatasetRecordFromJson(const OrderedJson& j);
SpanRecord SpanRecordFromJson(const OrderedJson& j);
ResultRecord ResultRecordFromJson(const OrderedJson& j);

std::vector<RecordEdit> ToRecordEdits(std::u32string_view original,
                                      const std::vector<Edit>& edits);

// Reads every non-blank line as JSON; errors carry file name and line.
template <typename T>
std::vector<T> ReadJsonl(const std::filesystem::path& path,
                         T (*parse)(const OrderedJson&));

std::vector<OrderedJson> ReadJsonlRaw(const std::filesystem::path& path);

// One compact JSON object per line, written atomically.
void WriteJsonl(const std::filesystem::path& path,
                const std::vector<OrderedJson>& rows);

template <typename T>
std::vector<OrderedJson> ToJsonRows(const std::vector<T>& records) {
  std::vector<OrderedJson> rows;
  rows.reserve(records.size());
  for (const T& r : records) rows.push_back(ToJson(r));
  return rows;
}

template <typename T>
std::vector<T> ReadJsonl(const std::filesystem::path& path,
                         T (*parse)(const OrderedJson&)) {
  std::vector<T> out;
  size_t index = 0;
  for (const OrderedJson& j : ReadJsonlRaw(path)) {
    ++index;
    try {
      out.push_back(parse(j));
    } catch (const ValidationError& e) {
      throw ValidationError(path.filename().string() + " record " +
                            std::to_string(index) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace forge

#endif  // FORGE_RECORDS_H_
