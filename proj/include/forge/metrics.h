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

// Detection rate, F1, non-toxic error rate and misinterpretation rate, all
// computed exactly as rationals; rounding happens only when formatting.

#ifndef FORGE_METRICS_H_
#define FORGE_METRICS_H_

#include <boost/rational.hpp>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/perturb.h"
#include "forge/records.h"
#include "forge/verdict.h"

namespace forge {

using Rational = boost::rational<int64_t>;

struct ConfusionCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  int64_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;
};

struct ScoredSample {
  Label gold = Label::kToxic;
  VerdictLabel predicted = VerdictLabel::kUnparseable;
};

// Toxic is the positive class; unparseable replies count as non-toxic.
ConfusionCounts Confusion(const std::vector<ScoredSample>& samples);

// 100 * flagged / N over a slice of gold-toxic verdicts. Throws
// ValidationError on an empty slice.
Rational DetectionRate(const std::vector<VerdictLabel>& toxic_slice);

// 2tp / (2tp + fp + fn). Throws ValidationError unless both gold classes are
// present.
Rational F1(const ConfusionCounts& counts);

// 100 * flagged / N over a slice of gold non-toxic verdicts. Throws
// ValidationError on an empty slice.
Rational ErrorRate(const std::vector<VerdictLabel>& non_toxic_slice);

// Round half up to `decimals` places: 85.505 -> "85.51", 0.75 -> "0.75".
std::string FormatRational(const Rational& r, int decimals = 2);

struct MrItem {
  std::string sample_id;
  std::optional<std::string> extracted;
  std::string gold_entity;  // original, unperturbed toxic surface
  std::vector<RecordEdit> perturbed_forms;
};

struct MrResult {
  Rational rate{0};
  size_t sampled = 0;
  size_t misunderstood = 0;
  size_t overridden = 0;  // judgments taken from the override file
  std::vector<std::string> sampled_ids;
};

// Automatic judgment: normalize the extracted text, map perturbed forms back
// to their sources, and check that the gold entity appears.
bool AutoUnderstood(const MrItem& item);

// Draws min(k, N) items deterministically from (ids, seed), judges each one
// (override first, automatic otherwise) and returns
// 100 * misunderstood / sampled. Throws ValidationError if a sampled item
// has no gold entity.
MrResult MisinterpretationRate(const std::vector<MrItem>& correct_detections,
                               size_t k, uint64_t seed,
                               const std::map<std::string, bool>& overrides);

// Worksheet columns plus an "understood" column (true/false, 1/0, yes/no);
// blank cells are skipped. Throws ValidationError.
std::map<std::string, bool> LoadMrOverrides(const std::filesystem::path& path);

}  // namespace forge

#endif  // FORGE_METRICS_H_
