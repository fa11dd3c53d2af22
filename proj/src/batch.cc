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

#include "forge/batch.h"

#include <variant>

#include "forge/rng.h"

namespace forge {
namespace {

using Outcome = std::variant<std::monostate, BatchRecord, BatchSkip>;

Outcome RunOne(const CharacterKnowledgeBase& kb, const BatchInput& in,
               PerturbationType type, const PerturbConfig& base) {
  PerturbConfig config = base;
  config.seed = RecordSeed(base.seed, in.id, type);
  try {
    BatchRecord rec;
    rec.original_id = in.id;
    rec.id = in.id + "#" + std::string(TypeFlag(type));
    rec.sample = Apply(kb, type, in.text, in.spans, config);
    return rec;
  } catch (const PerturbError& e) {
    return BatchSkip{in.id, type, std::string(PerturbErrorKindName(e.kind())),
                     e.what()};
  } catch (const UnknownCharError& e) {
    return BatchSkip{in.id, type, "unknown_char", e.what()};
  } catch (const Error& e) {
    return BatchSkip{in.id, type, "invalid_input", e.what()};
  }
}

BatchResult Collect(std::vector<Outcome>& outcomes) {
  BatchResult result;
  for (Outcome& o : outcomes) {
    if (auto* r = std::get_if<BatchRecord>(&o)) {
      result.records.push_back(std::move(*r));
    } else if (auto* s = std::get_if<BatchSkip>(&o)) {
      result.skips.push_back(std::move(*s));
    }
  }
  return result;
}

}  // namespace

uint64_t RecordSeed(uint64_t seed, const std::string& original_id,
                    PerturbationType type) {
  return DeriveSeed(seed, original_id, TypeIndex(type) + 1);
}

BatchResult BatchPerturbSerial(const CharacterKnowledgeBase& kb,
                               const std::vector<BatchInput>& inputs,
                               const std::vector<PerturbationType>& types,
                               const PerturbConfig& config) {
  std::vector<Outcome> outcomes;
  for (const BatchInput& in : inputs) {
    if (in.label != Label::kToxic) continue;
    for (PerturbationType t : types) {
      outcomes.push_back(RunOne(kb, in, t, config));
    }
  }
  return Collect(outcomes);
}

BatchResult BatchPerturb(const CharacterKnowledgeBase& kb,
                         const std::vector<BatchInput>& inputs,
                         const std::vector<PerturbationType>& types,
                         const PerturbConfig& config) {
  const long n_types = static_cast<long>(types.size());
  const long total = static_cast<long>(inputs.size()) * n_types;
  std::vector<Outcome> outcomes(static_cast<size_t>(total));
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < total; ++i) {
    const BatchInput& in = inputs[static_cast<size_t>(i / n_types)];
    if (in.label != Label::kToxic) continue;
    outcomes[static_cast<size_t>(i)] =
        RunOne(kb, in, types[static_cast<size_t>(i % n_types)], config);
  }
  return Collect(outcomes);
}

}  // namespace forge
