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

// Chat-format fine-tuning files built from dataset samples, with a
// hyperparameter sidecar, and their re-import.

#ifndef FORGE_FINETUNE_H_
#define FORGE_FINETUNE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "forge/prompts.h"
#include "forge/records.h"

namespace forge {

struct FinetuneSample {
  std::string sample_id;
  std::string text;
  Label label = Label::kToxic;
  std::optional<std::string> toxic_text;  // surface as it appears in text

  friend bool operator==(const FinetuneSample&, const FinetuneSample&) = default;
};

struct FinetuneHyperparameters {
  int batch_size = 16;
  int epochs = 3;
  double learning_rate_multiplier = 0.1;
  double presence_penalty = 0.0;
  double frequency_penalty = 0.0;
  double temperature = 0.0;
  double top_p = 1.0;
};

// Standard fine-tuning sample sizes.
inline constexpr int kFinetuneGrid[] = {10, 20, 40};

// Maps [start, end) of `original` through `edits` into the edited text.
// Edits touching the range are included whole.
std::pair<size_t, size_t> MapRange(const std::vector<RecordEdit>& edits,
                                   size_t start, size_t end);

// Every labelled record of a built dataset directory.
std::vector<FinetuneSample> FinetuneCandidates(
    const std::filesystem::path& data_dir);

// n records chosen deterministically from `seed`, sorted by sample id.
// Throws ValidationError for n == 0 or when fewer than n candidates exist.
std::vector<FinetuneSample> SelectFinetuneSamples(
    const std::vector<FinetuneSample>& candidates, size_t n, uint64_t seed);

// The reply the model is trained to give, in the template's output format.
std::string AssistantVerdict(const FinetuneSample& s, PromptLanguage lang);

// Sidecar path for a training file: "train.jsonl" -> "train.hparams.json".
std::filesystem::path SidecarPath(const std::filesystem::path& training_file);

// Writes the training file and its sidecar. Sizes outside the standard
// grid are allowed but logged as a warning.
void ExportFinetune(const std::vector<FinetuneSample>& samples,
                    const PromptTemplate& tmpl,
                    const std::filesystem::path& out_path, uint64_t seed,
                    const FinetuneHyperparameters& hp = {});

// Parses a training file (and its sidecar for sample ids) back into
// samples. Throws ValidationError on schema violations.
std::vector<FinetuneSample> ImportFinetune(
    const std::filesystem::path& training_file);

}  // namespace forge

#endif  // FORGE_FINETUNE_H_
