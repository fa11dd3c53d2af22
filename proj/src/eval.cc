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

#include "forge/eval.h"

#include <map>
#include <mutex>

#include "forge/dataset.h"
#include "forge/parallel.h"
#include "forge/verdict.h"

namespace forge {

std::string GoldEntity(const std::vector<ToxicSpan>& spans,
                       const std::vector<RecordEdit>& edits) {
  if (spans.empty()) return "";
  for (const RecordEdit& e : edits) {
    for (const ToxicSpan& s : spans) {
      if (e.start < s.end && s.start < e.end) return s.surface;
    }
  }
  return spans.front().surface;
}

std::vector<EvalSample> LoadEvalSamples(const std::filesystem::path& data_dir) {
  std::map<std::string, std::vector<ToxicSpan>> spans;
  for (const SpanRecord& s : ReadJsonl(data_dir / kSpansFile, &SpanRecordFromJson)) {
    spans[s.id] = s.spans;
  }
  std::vector<EvalSample> out;
  for (const DatasetRecord& r :
       ReadJsonl(data_dir / kDatasetFile, &DatasetRecordFromJson)) {
    EvalSample s;
    s.sample_id = r.id;
    s.original_id = r.original_id;
    s.type = r.type;
    s.gold = r.label;
    s.text = r.text;
    s.perturbed_forms = r.edits;
    if (r.label == Label::kToxic) {
      auto it = spans.find(r.original_id);
      if (it != spans.end()) s.gold_entity = GoldEntity(it->second, r.edits);
    }
    out.push_back(std::move(s));
  }
  return out;
}

EvalOutcome RunEval(ChatClient& client, const EndpointConfig& endpoint,
                    const PromptTemplate& tmpl,
                    const std::vector<EvalSample>& samples,
                    const EvalOptions& options) {
  if (tmpl.parser == ReplyParser::kExtraction) {
    throw ValidationError("template " + tmpl.id +
                          " is an extraction template, not a detection one");
  }
  if (endpoint.max_concurrent < 1) {
    throw ValidationError("max_concurrent must be at least 1");
  }
  EvalOutcome outcome;
  outcome.records.resize(samples.size());
  std::vector<std::string> errors(samples.size());
  ParallelFor(samples.size(), endpoint.max_concurrent, [&](size_t i) {
    const EvalSample& s = samples[i];
    ResultRecord& r = outcome.records[i];
    r.sample_id = s.sample_id;
    r.original_id = s.original_id;
    r.type = s.type;
    r.gold_label = s.gold;
    r.model = endpoint.name;
    r.template_id = tmpl.id;
    r.gold_entity = s.gold_entity;
    r.perturbed_forms = s.perturbed_forms;
    const auto messages = RenderPrompt(tmpl, s.text, options.icl);
    try {
      r.raw = client.Query(endpoint, messages, options.gen, {s.sample_id});
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      errors[i] = s.sample_id + ": " + e.what();
      r.label = VerdictLabel::kUnparseable;
      return;
    }
    const Verdict v = tmpl.parser == ReplyParser::kCacot ? ParseCacot(r.raw)
                                                         : ParseVerdict(r.raw);
    r.label = v.label;
    r.extracted = v.extracted;
    r.stages = v.stages;
  });
  for (std::string& e : errors) {
    if (e.empty()) continue;
    ++outcome.failures;
    outcome.errors.push_back(std::move(e));
  }
  if (static_cast<double>(outcome.failures) >
      options.max_failure_fraction * static_cast<double>(samples.size())) {
    throw Error("aborting: " + std::to_string(outcome.failures) + " of " +
                std::to_string(samples.size()) +
                " requests failed after retries; first: " +
                outcome.errors.front());
  }
  return outcome;
}

}  // namespace forge
