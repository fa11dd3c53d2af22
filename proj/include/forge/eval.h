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

// Detection benchmark: renders each dataset sample with a prompt template,
// queries an endpoint through the caching client with bounded concurrency
// and parses the replies into result records.

#ifndef FORGE_EVAL_H_
#define FORGE_EVAL_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forge/chat.h"
#include "forge/prompts.h"
#include "forge/records.h"

namespace forge {

struct EvalSample {
  std::string sample_id;
  std::string original_id;
  std::optional<PerturbationType> type;
  Label gold = Label::kToxic;
  std::string text;
  std::string gold_entity;  // original toxic surface; empty for non-toxic
  std::vector<RecordEdit> perturbed_forms;
};

// Samples of a built dataset directory (dataset.jsonl), with gold entities
// taken from its extracted spans. Throws ValidationError.
std::vector<EvalSample> LoadEvalSamples(const std::filesystem::path& data_dir);

// Gold entity of a record: for perturbed records the first span touched by
// an edit, otherwise the first span.
std::string GoldEntity(const std::vector<ToxicSpan>& spans,
                       const std::vector<RecordEdit>& edits);

struct EvalOptions {
  GenConfig gen;
  const std::vector<IclExample>* icl = nullptr;
  double max_failure_fraction = 0.10;
};

struct EvalOutcome {
  std::vector<ResultRecord> records;  // same order as the samples
  size_t failures = 0;
  std::vector<std::string> errors;
};

// Requests run on up to endpoint.max_concurrent threads. A request that
// still fails after retries yields an unparseable record; when more than
// max_failure_fraction of the samples fail, throws Error.
EvalOutcome RunEval(ChatClient& client, const EndpointConfig& endpoint,
                    const PromptTemplate& tmpl,
                    const std::vector<EvalSample>& samples,
                    const EvalOptions& options = {});

}  // namespace forge

#endif  // FORGE_EVAL_H_
