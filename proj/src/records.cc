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

#include "forge/records.h"

#include <sstream>

#include "forge/hash.h"
#include "forge/utf8.h"

namespace forge {
namespace {

template <typename T>
T Field(const OrderedJson& j, const char* name) {
  if (!j.contains(name)) {
    throw ValidationError(std::string("missing field '") + name + "'");
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("field '") + name +
                          "' has the wrong type");
  }
}

Label LabelField(const OrderedJson& j, const char* name) {
  const auto l = ParseLabel(Field<std::string>(j, name));
  if (!l) {
    throw ValidationError(std::string("field '") + name +
                          "' must be toxic or non_toxic");
  }
  return *l;
}

std::optional<PerturbationType> TypeField(const OrderedJson& j) {
  if (!j.contains("type") || j["type"].is_null()) return std::nullopt;
  const auto t = ParseType(Field<std::string>(j, "type"));
  if (!t) throw ValidationError("unknown perturbation type");
  return t;
}

OrderedJson EditsJson(const std::vector<RecordEdit>& edits) {
  OrderedJson arr = OrderedJson::array();
  for (const RecordEdit& e : edits) {
    arr.push_back({{"start", e.start},
                   {"end", e.end},
                   {"source", e.source},
                   {"replacement", e.replacement}});
  }
  return arr;
}

std::vector<RecordEdit> EditsFromJson(const OrderedJson& j, const char* name) {
  std::vector<RecordEdit> out;
  if (!j.contains(name)) return out;
  for (const OrderedJson& e : j.at(name)) {
    RecordEdit r;
    r.start = Field<size_t>(e, "start");
    r.end = Field<size_t>(e, "end");
    r.source = Field<std::string>(e, "source");
    r.replacement = Field<std::string>(e, "replacement");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

OrderedJson ToJson(const CorpusRecord& r) {
  return {{"id", r.id},
          {"text", r.text},
          {"label", LabelName(r.label)},
          {"source_tag", r.source_tag}};
}

CorpusRecord CorpusRecordFromJson(const OrderedJson& j) {
  CorpusRecord r;
  r.id = Field<std::string>(j, "id");
  r.text = Field<std::string>(j, "text");
  r.label = LabelField(j, "label");
  r.source_tag = j.value("source_tag", "");
  if (r.id.empty()) throw ValidationError("empty id");
  if (r.text.empty()) throw ValidationError("empty text for '" + r.id + "'");
  return r;
}

OrderedJson ToJson(const DatasetRecord& r) {
  OrderedJson j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["label"] = LabelName(r.label);
  if (r.type) j["type"] = TypeFlag(*r.type);
  j["original_id"] = r.original_id;
  j["edits"] = EditsJson(r.edits);
  j["ratio"] = r.ratio;
  j["seed"] = r.seed;
  return j;
}

DatasetRecord DatasetRecordFromJson(const OrderedJson& j) {
  DatasetRecord r;
  r.id = Field<std::string>(j, "id");
  r.text = Field<std::string>(j, "text");
  r.label = LabelField(j, "label");
  r.type = TypeField(j);
  r.original_id = Field<std::string>(j, "original_id");
  r.edits = EditsFromJson(j, "edits");
  r.ratio = Field<double>(j, "ratio");
  r.seed = Field<uint64_t>(j, "seed");
  return r;
}

OrderedJson ToJson(const SpanRecord& r) {
  OrderedJson spans = OrderedJson::array();
  for (const ToxicSpan& s : r.spans) {
    spans.push_back({{"start", s.start}, {"end", s.end}, {"surface", s.surface}});
  }
  return {{"id", r.id}, {"text", r.text}, {"source", r.source},
          {"spans", spans}};
}

SpanRecord SpanRecordFromJson(const OrderedJson& j) {
  SpanRecord r;
  r.id = Field<std::string>(j, "id");
  r.text = Field<std::string>(j, "text");
  r.source = j.value("source", "");
  for (const OrderedJson& s : j.at("spans")) {
    r.spans.push_back({Field<size_t>(s, "start"), Field<size_t>(s, "end"),
                       s.value("surface", "")});
  }
  return r;
}

OrderedJson ToJson(const ResultRecord& r) {
  OrderedJson j;
  j["sample_id"] = r.sample_id;
  j["original_id"] = r.original_id;
  j["type"] = r.type ? OrderedJson(TypeFlag(*r.type)) : OrderedJson(nullptr);
  j["gold_label"] = LabelName(r.gold_label);
  j["label"] = VerdictLabelName(r.label);
  j["extracted"] = r.extracted ? OrderedJson(*r.extracted) : OrderedJson(nullptr);
  j["raw"] = r.raw;
  j["model"] = r.model;
  j["template"] = r.template_id;
  j["gold_entity"] = r.gold_entity;
  j["perturbed_forms"] = EditsJson(r.perturbed_forms);
  if (r.stages) {
    j["stages"] = {{"analysis", r.stages->analysis},
                   {"recovery", r.stages->recovery},
                   {"judgment", r.stages->judgment}};
  }
  return j;
}

ResultRecord ResultRecordFromJson(const OrderedJson& j) {
  ResultRecord r;
  r.sample_id = Field<std::string>(j, "sample_id");
  r.original_id = Field<std::string>(j, "original_id");
  r.type = TypeField(j);
  r.gold_label = LabelField(j, "gold_label");
  const auto label = ParseVerdictLabelName(Field<std::string>(j, "label"));
  if (!label) throw ValidationError("field 'label' must be 0, 1 or unparseable");
  r.label = *label;
  if (j.contains("extracted") && !j["extracted"].is_null()) {
    r.extracted = Field<std::string>(j, "extracted");
  }
  r.raw = j.value("raw", "");
  r.model = Field<std::string>(j, "model");
  r.template_id = Field<std::string>(j, "template");
  r.gold_entity = j.value("gold_entity", "");
  r.perturbed_forms = EditsFromJson(j, "perturbed_forms");
  if (j.contains("stages")) {
    const auto& s = j["stages"];
    r.stages = CacotStages{s.value("analysis", ""), s.value("recovery", ""),
                           s.value("judgment", "")};
  }
  return r;
}

std::vector<RecordEdit> ToRecordEdits(std::u32string_view original,
                                      const std::vector<Edit>& edits) {
  std::vector<RecordEdit> out;
  for (const Edit& e : edits) {
    out.push_back({e.start, e.end,
                   utf8::Encode(original.substr(e.start, e.end - e.start)),
                   e.replacement});
  }
  return out;
}

std::vector<OrderedJson> ReadJsonlRaw(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<OrderedJson> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(OrderedJson::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.filename().string() + ":" +
                            std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void WriteJsonl(const std::filesystem::path& path,
                const std::vector<OrderedJson>& rows) {
  std::string out;
  for (const OrderedJson& r : rows) {
    out += r.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

}  // namespace forge
