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

// Dataset construction pipeline: sample a balanced base corpus, extract
// toxic spans, embed perturbations, round-trip readability annotations and
// emit the final dataset with a manifest. Every stage reads and writes files
// in one output directory and is skipped when its inputs are unchanged.

#ifndef FORGE_DATASET_H_
#define FORGE_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/char_kb.h"
#include "forge/extract.h"
#include "forge/metrics.h"
#include "forge/records.h"

namespace forge {

inline constexpr char kBaseFile[] = "01_base.jsonl";
inline constexpr char kSpansFile[] = "02_spans.jsonl";
inline constexpr char kPerturbedFile[] = "03_perturbed.jsonl";
inline constexpr char kSkipsFile[] = "03_skips.jsonl";
inline constexpr char kWorksheetFile[] = "04_annotation.tsv";
inline constexpr char kAnnotationsFile[] = "05_annotations.tsv";
inline constexpr char kDatasetFile[] = "dataset.jsonl";
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kBuildConfigFile[] = "build_config.json";

struct AnnotationRecord {
  std::string sample_id;
  int readability = 0;  // 1..5
  std::optional<bool> extraction_ok;
  std::string annotator;
};

// Unique ids, non-empty text. Throws ValidationError.
std::vector<CorpusRecord> LoadCorpus(const std::filesystem::path& path);

// Exactly toxic_n toxic and nontoxic_n non-toxic records, drawn without
// replacement; the result keeps corpus order. Throws ValidationError when
// the corpus is too small.
std::vector<CorpusRecord> SampleBase(const std::vector<CorpusRecord>& corpus,
                                     size_t toxic_n, size_t nontoxic_n,
                                     uint64_t seed);

// Tab-separated sample_id, text, readability, extraction_ok, annotator.
// `annotations` rows are written first, then a blank row for every record
// that has none.
std::string AnnotationWorksheet(const std::vector<DatasetRecord>& perturbed,
                                const std::vector<AnnotationRecord>& annotations);

// Rows with an empty readability cell are skipped (still pending). Throws
// ValidationError for bad scores, unknown sample ids (when `known` is
// given), missing annotators and duplicate (sample, annotator) pairs.
std::vector<AnnotationRecord> ParseAnnotations(
    const std::string& tsv, const std::string& file_name,
    const std::set<std::string>* known = nullptr);

struct ReadabilityOutcome {
  std::vector<std::string> kept;
  std::vector<std::string> discarded;
  std::vector<std::string> pending;  // no annotation yet
  std::map<std::string, Rational> mean;
};

// Kept iff the mean score over annotators is >= threshold (ties kept).
// Output lists follow the order of `sample_ids`.
ReadabilityOutcome FilterReadability(
    const std::vector<std::string>& sample_ids,
    const std::vector<AnnotationRecord>& annotations, int threshold = 3);

struct DatasetConfig {
  std::filesystem::path corpus;
  std::filesystem::path tables;
  std::filesystem::path out;
  std::optional<std::filesystem::path> annotations;  // imported before finalize
  uint64_t seed = 0;
  std::optional<size_t> toxic_n;     // default: every toxic record
  std::optional<size_t> nontoxic_n;  // default: every non-toxic record
  double rate = 0.3;
  std::vector<PerturbationType> types{kAllPerturbationTypes.begin(),
                                      kAllPerturbationTypes.end()};
  PinyinCase pinyin_case = PinyinCase::kLower;
  int shuffle_window = 2;
  int readability_threshold = 3;
};

// Span extraction for a batch of texts, order-preserving.
struct SpanExtractor {
  std::string tag;  // recorded in the manifest and the stage fingerprint
  std::function<std::vector<ExtractionResult>(const std::vector<SampleText>&)>
      run;
};

SpanExtractor LexiconExtractor(const ToxicLexicon& lexicon,
                               const std::string& checksum);

struct BuildSummary {
  std::vector<std::string> ran;
  std::vector<std::string> skipped;  // already complete
  OrderedJson manifest;
};

// Runs every stage. Stage errors are rethrown with the stage name
// prepended; files from completed stages stay on disk.
BuildSummary BuildDataset(const DatasetConfig& config,
                         const CharacterKnowledgeBase& kb,
                         const SpanExtractor& extractor);

// Writes the worksheet for `data_dir` to `out_file`, carrying over any
// annotations already imported.
void ExportAnnotations(const std::filesystem::path& data_dir,
                       const std::filesystem::path& out_file);

// Validates `file`, stores it as the directory's annotation file and
// refreshes dataset.jsonl and the manifest.
OrderedJson ImportAnnotations(const std::filesystem::path& data_dir,
                              const std::filesystem::path& file);

// SHA-256 over the three table files.
std::string TablesChecksum(const std::filesystem::path& tables_dir);

}  // namespace forge

#endif  // FORGE_DATASET_H_
