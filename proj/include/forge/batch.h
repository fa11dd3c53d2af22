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

#ifndef FORGE_BATCH_H_
#define FORGE_BATCH_H_

#include <string>
#include <vector>

#include "forge/char_kb.h"
#include "forge/perturb.h"

namespace forge {

struct BatchInput {
  std::string id;
  std::string text;
  Label label = Label::kToxic;
  std::vector<ToxicSpan> spans;
};

struct BatchRecord {
  std::string id;  // "{original_id}#{type flag}"
  std::string original_id;
  PerturbedSample sample;
};

struct BatchSkip {
  std::string original_id;
  PerturbationType type;
  std::string reason;  // error kind, e.g. "no_candidate"
  std::string message;
};

struct BatchResult {
  std::vector<BatchRecord> records;
  std::vector<BatchSkip> skips;
};

// Seed used for one (sample, type) pair; independent of scheduling.
uint64_t RecordSeed(uint64_t seed, const std::string& original_id,
                    PerturbationType type);

// Applies every type to every toxic input. Non-toxic inputs are ignored.
// Records come out ordered by input index, then by position in `types`;
// failures become skips instead of aborting the batch.
BatchResult BatchPerturb(const CharacterKnowledgeBase& kb,
                         const std::vector<BatchInput>& inputs,
                         const std::vector<PerturbationType>& types,
                         const PerturbConfig& config);

// Single-threaded reference with identical output.
BatchResult BatchPerturbSerial(const CharacterKnowledgeBase& kb,
                               const std::vector<BatchInput>& inputs,
                               const std::vector<PerturbationType>& types,
                               const PerturbConfig& config);

}  // namespace forge

#endif  // FORGE_BATCH_H_
