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

#include "forge/dataset.h"

#include <algorithm>
#include <sstream>

#include "forge/batch.h"
#include "forge/hash.h"
#include "forge/rng.h"
#include "forge/utf8.h"

namespace forge {
namespace {

namespace fs = std::filesystem;

constexpr char kFinalizeStage[] = "05_finalize";

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == '\t') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back().push_back(c);
    }
  }
  return out;
}

std::string Cell(std::string s) {
  std::replace(s.begin(), s.end(), '\t', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string FileSha(const fs::path& p) {
  return fs::exists(p) ? Sha256File(p) : std::string("none");
}

double Mean(double sum, size_t n) { return n == 0 ? 0.0 : sum / n; }

struct Stage {
  std::string name;
  std::function<std::string()> fingerprint;
  std::vector<std::string> outputs;
  std::function<void()> run;
};

void RunStage(const fs::path& dir, const Stage& stage, BuildSummary& report) {
  const fs::path marker = dir / ("." + stage.name + ".done");
  try {
    const std::string fp = stage.fingerprint();
    bool complete = fs::exists(marker) && ReadFile(marker) == fp;
    for (const std::string& out : stage.outputs) {
      complete = complete && fs::exists(dir / out);
    }
    if (complete) {
      report.skipped.push_back(stage.name);
      return;
    }
    fs::remove(marker);
    stage.run();
    WriteFileAtomic(marker, fp);
    report.ran.push_back(stage.name);
  } catch (const ValidationError& e) {
    throw ValidationError("stage " + stage.name + ": " + e.what());
  } catch (const Error& e) {
    throw Error("stage " + stage.name + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error("stage " + stage.name + ": " + e.what());
  }
}

OrderedJson ConfigJson(const DatasetConfig& c, const std::string& extractor,
                       const std::string& kb_checksum) {
  OrderedJson types = OrderedJson::array();
  for (PerturbationType t : c.types) types.push_back(TypeFlag(t));
  return {{"corpus", c.corpus.string()},
          {"corpus_sha256", Sha256File(c.corpus)},
          {"tables", c.tables.string()},
          {"kb_sha256", kb_checksum},
          {"extractor", extractor},
          {"seed", c.seed},
          {"toxic_n", c.toxic_n ? OrderedJson(*c.toxic_n) : OrderedJson()},
          {"nontoxic_n",
           c.nontoxic_n ? OrderedJson(*c.nontoxic_n) : OrderedJson()},
          {"rate", c.rate},
          {"types", types},
          {"pinyin_case",
           c.pinyin_case == PinyinCase::kUpper ? "upper" : "lower"},
          {"shuffle_window", c.shuffle_window},
          {"readability_threshold", c.readability_threshold}};
}

DatasetRecord BaseRecord(const CorpusRecord& c, uint64_t seed) {
  DatasetRecord r;
  r.id = c.id;
  r.text = c.text;
  r.label = c.label;
  r.original_id = c.id;
  r.seed = seed;
  return r;
}

DatasetRecord FromBatch(const BatchRecord& b) {
  DatasetRecord r;
  r.id = b.id;
  r.text = b.sample.perturbed;
  r.label = b.sample.label;
  r.type = b.sample.type;
  r.original_id = b.original_id;
  r.edits = ToRecordEdits(utf8::Decode(b.sample.original), b.sample.edits);
  r.ratio = b.sample.ratio;
  r.seed = b.sample.seed;
  return r;
}

std::vector<AnnotationRecord> LoadAnnotationsIfAny(
    const fs::path& dir, const std::set<std::string>& known) {
  const fs::path p = dir / kAnnotationsFile;
  if (!fs::exists(p)) return {};
  return ParseAnnotations(ReadFile(p), kAnnotationsFile, &known);
}

OrderedJson Finalize(const fs::path& dir) {
  const OrderedJson config =
      OrderedJson::parse(ReadFile(dir / kBuildConfigFile));
  const uint64_t seed = config.at("seed").get<uint64_t>();
  const int threshold = config.at("readability_threshold").get<int>();
  const auto base = ReadJsonl(dir / kBaseFile, &CorpusRecordFromJson);
  const auto perturbed = ReadJsonl(dir / kPerturbedFile, &DatasetRecordFromJson);
  const auto skips = ReadJsonlRaw(dir / kSkipsFile);

  std::vector<std::string> ids;
  std::set<std::string> known;
  for (const DatasetRecord& r : perturbed) {
    ids.push_back(r.id);
    known.insert(r.id);
  }
  const auto annotations = LoadAnnotationsIfAny(dir, known);
  const ReadabilityOutcome outcome =
      FilterReadability(ids, annotations, threshold);
  const std::set<std::string> kept(outcome.kept.begin(), outcome.kept.end());
  const std::set<std::string> discarded(outcome.discarded.begin(),
                                        outcome.discarded.end());

  std::vector<OrderedJson> rows;
  std::map<std::string, size_t> dataset_counts;
  for (const CorpusRecord& c : base) {
    rows.push_back(ToJson(BaseRecord(c, seed)));
    ++dataset_counts[std::string(LabelName(c.label))];
  }
  // Per-type tallies, keyed by type flag in canonical type order.
  struct Tally {
    size_t perturbed = 0, kept = 0, discarded = 0, pending = 0, skipped = 0;
    double ratio_sum = 0, kept_ratio_sum = 0, max_ratio = 0;
    Rational readability_sum{0};
    size_t readability_n = 0;
  };
  std::map<PerturbationType, Tally> tally;
  for (PerturbationType t : kAllPerturbationTypes) tally[t];
  Tally all;
  for (const DatasetRecord& r : perturbed) {
    Tally& t = tally[*r.type];
    for (Tally* x : {&t, &all}) {
      ++x->perturbed;
      x->ratio_sum += r.ratio;
      x->max_ratio = std::max(x->max_ratio, r.ratio);
      if (kept.count(r.id)) {
        ++x->kept;
        x->kept_ratio_sum += r.ratio;
      } else if (discarded.count(r.id)) {
        ++x->discarded;
      } else {
        ++x->pending;
      }
      if (auto it = outcome.mean.find(r.id); it != outcome.mean.end()) {
        x->readability_sum += it->second;
        ++x->readability_n;
      }
    }
    if (kept.count(r.id)) {
      rows.push_back(ToJson(r));
      ++dataset_counts["perturbed"];
    }
  }
  std::map<std::string, size_t> skip_reasons;
  for (const OrderedJson& s : skips) {
    const auto t = ParseType(s.at("type").get<std::string>());
    if (t) ++tally[*t].skipped;
    ++all.skipped;
    ++skip_reasons[s.at("reason").get<std::string>()];
  }
  WriteJsonl(dir / kDatasetFile, rows);

  auto readability = [](const Tally& t) {
    return t.readability_n == 0
               ? OrderedJson()
               : OrderedJson(boost::rational_cast<double>(
                     t.readability_sum / static_cast<int64_t>(t.readability_n)));
  };
  auto tally_json = [&](const Tally& t) {
    return OrderedJson{{"perturbed", t.perturbed},
                       {"skipped", t.skipped},
                       {"kept", t.kept},
                       {"discarded", t.discarded},
                       {"pending", t.pending},
                       {"mean_ratio", Mean(t.ratio_sum, t.perturbed)},
                       {"max_ratio", t.max_ratio},
                       {"mean_ratio_kept", Mean(t.kept_ratio_sum, t.kept)},
                       {"mean_readability", readability(t)},
                       {"annotated", t.readability_n}};
  };
  OrderedJson per_type = OrderedJson::object();
  for (PerturbationType t : kAllPerturbationTypes) {
    per_type[std::string(TypeFlag(t))] = tally_json(tally[t]);
  }
  size_t base_toxic = 0, base_clean = 0;
  for (const CorpusRecord& c : base) {
    (c.label == Label::kToxic ? base_toxic : base_clean)++;
  }
  const double rate = config.at("rate").get<double>();
  OrderedJson manifest;
  manifest["kind"] = "dataset";
  manifest["status"] = all.pending == 0 ? "complete" : "awaiting_annotations";
  manifest["seed"] = seed;
  manifest["config"] = config;
  manifest["aggregation"] =
      "readability = mean over annotators; kept when mean >= threshold";
  manifest["base"] = {{"toxic", base_toxic}, {"non_toxic", base_clean}};
  manifest["totals"] = tally_json(all);
  manifest["per_type"] = per_type;
  manifest["skip_reasons"] = skip_reasons;
  manifest["corpus_mean_ratio_within_cap"] = Mean(all.ratio_sum, all.perturbed) <= rate;
  manifest["discard_count"] = all.discarded;
  manifest["pending_count"] = all.pending;
  manifest["dataset"] = {
      {"records", rows.size()},
      {"toxic_base", base_toxic},
      {"non_toxic", base_clean},
      {"perturbed", dataset_counts["perturbed"]}};
  OrderedJson files = OrderedJson::object();
  for (const char* f : {kBaseFile, kSpansFile, kPerturbedFile, kSkipsFile,
                        kAnnotationsFile, kDatasetFile}) {
    if (fs::exists(dir / f)) files[f] = Sha256File(dir / f);
  }
  manifest["files"] = files;
  WriteFileAtomic(dir / kManifestFile, manifest.dump(2) + "\n");
  return manifest;
}

std::string FinalizeFingerprint(const fs::path& dir) {
  std::string all;
  for (const char* f : {kBuildConfigFile, kBaseFile, kPerturbedFile,
                        kSkipsFile, kAnnotationsFile}) {
    all += std::string(f) + "=" + FileSha(dir / f) + "\n";
  }
  return Sha256Hex(all);
}

}  // namespace

std::vector<CorpusRecord> LoadCorpus(const fs::path& path) {
  auto corpus = ReadJsonl(path, &CorpusRecordFromJson);
  std::set<std::string> seen;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const std::string where = path.filename().string() + " record " +
                              std::to_string(i + 1) + ": ";
    if (corpus[i].id.empty()) throw ValidationError(where + "empty id");
    if (!seen.insert(corpus[i].id).second) {
      throw ValidationError(where + "duplicate id '" + corpus[i].id + "'");
    }
    if (corpus[i].text.empty()) throw ValidationError(where + "empty text");
    utf8::Decode(corpus[i].text);
  }
  return corpus;
}

std::vector<CorpusRecord> SampleBase(const std::vector<CorpusRecord>& corpus,
                                     size_t toxic_n, size_t nontoxic_n,
                                     uint64_t seed) {
  std::vector<size_t> chosen;
  for (Label label : {Label::kToxic, Label::kNonToxic}) {
    const size_t want = label == Label::kToxic ? toxic_n : nontoxic_n;
    std::vector<size_t> pool;
    for (size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].label == label) pool.push_back(i);
    }
    if (pool.size() < want) {
      throw ValidationError("corpus has " + std::to_string(pool.size()) + " " +
                            std::string(LabelName(label)) +
                            " records, " + std::to_string(want) +
                            " requested");
    }
    SplitMix64 rng(DeriveSeed(seed, "sample_base", static_cast<int>(label) + 1));
    rng.Shuffle(pool);
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + want);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<CorpusRecord> out;
  out.reserve(chosen.size());
  for (size_t i : chosen) out.push_back(corpus[i]);
  return out;
}

std::string AnnotationWorksheet(
    const std::vector<DatasetRecord>& perturbed,
    const std::vector<AnnotationRecord>& annotations) {
  std::map<std::string, std::vector<const AnnotationRecord*>> by_id;
  for (const AnnotationRecord& a : annotations) by_id[a.sample_id].push_back(&a);
  std::ostringstream out;
  out << "sample_id\ttext\treadability\textraction_ok\tannotator\n";
  for (const DatasetRecord& r : perturbed) {
    auto it = by_id.find(r.id);
    if (it == by_id.end()) {
      out << r.id << '\t' << Cell(r.text) << "\t\t\t\n";
      continue;
    }
    for (const AnnotationRecord* a : it->second) {
      out << r.id << '\t' << Cell(r.text) << '\t' << a->readability << '\t'
          << (a->extraction_ok ? (*a->extraction_ok ? "1" : "0") : "")
          << '\t' << Cell(a->annotator) << '\n';
    }
  }
  return out.str();
}

std::vector<AnnotationRecord> ParseAnnotations(
    const std::string& tsv, const std::string& file_name,
    const std::set<std::string>* known) {
  std::istringstream in(tsv);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(file_name + " is empty");
  const auto header = SplitTabs(line);
  auto column = [&](const char* name, bool required) -> std::optional<size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) {
        throw ValidationError(file_name + " lacks column '" + name + "'");
      }
      return std::nullopt;
    }
    return static_cast<size_t>(it - header.begin());
  };
  const size_t id_col = *column("sample_id", true);
  const size_t score_col = *column("readability", true);
  const size_t annotator_col = *column("annotator", true);
  const auto ok_col = column("extraction_ok", false);

  std::vector<AnnotationRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = file_name + ":" + std::to_string(line_no) + ": ";
    auto cells = SplitTabs(line);
    cells.resize(std::max(cells.size(), header.size()));
    const std::string& score = cells[score_col];
    if (score.empty()) continue;
    AnnotationRecord a;
    a.sample_id = cells[id_col];
    if (known != nullptr && !known->count(a.sample_id)) {
      throw ValidationError(where + "unknown sample_id '" + a.sample_id + "'");
    }
    if (score.size() != 1 || score[0] < '1' || score[0] > '5') {
      throw ValidationError(where + "readability must be an integer 1..5, got '" +
                            score + "'");
    }
    a.readability = score[0] - '0';
    if (ok_col) {
      std::string v = cells[*ok_col];
      std::transform(v.begin(), v.end(), v.begin(), ::tolower);
      if (v == "true" || v == "1" || v == "yes") {
        a.extraction_ok = true;
      } else if (v == "false" || v == "0" || v == "no") {
        a.extraction_ok = false;
      } else if (!v.empty()) {
        throw ValidationError(where + "extraction_ok must be 1 or 0");
      }
    }
    a.annotator = cells[annotator_col];
    if (a.annotator.empty()) throw ValidationError(where + "annotator missing");
    if (!seen.emplace(a.sample_id, a.annotator).second) {
      throw ValidationError(where + "duplicate annotation by '" + a.annotator +
                            "' for '" + a.sample_id + "'");
    }
    out.push_back(std::move(a));
  }
  return out;
}

ReadabilityOutcome FilterReadability(
    const std::vector<std::string>& sample_ids,
    const std::vector<AnnotationRecord>& annotations, int threshold) {
  std::map<std::string, std::pair<int64_t, int64_t>> sums;
  for (const AnnotationRecord& a : annotations) {
    auto& [sum, n] = sums[a.sample_id];
    sum += a.readability;
    ++n;
  }
  ReadabilityOutcome out;
  for (const std::string& id : sample_ids) {
    auto it = sums.find(id);
    if (it == sums.end()) {
      out.pending.push_back(id);
      continue;
    }
    const auto [sum, n] = it->second;
    out.mean[id] = Rational(sum, n);
    (sum >= threshold * n ? out.kept : out.discarded).push_back(id);
  }
  return out;
}

SpanExtractor LexiconExtractor(const ToxicLexicon& lexicon,
                               const std::string& checksum) {
  return {"lexicon:" + checksum,
          [&lexicon](const std::vector<SampleText>& in) {
            return ExtractBatch(lexicon, in);
          }};
}

std::string TablesChecksum(const fs::path& tables_dir) {
  const TablePaths p = TablePaths::InDirectory(tables_dir);
  return Sha256Hex(Sha256File(p.chars) + Sha256File(p.visual) +
                   Sha256File(p.emoji));
}

BuildSummary BuildDataset(const DatasetConfig& config,
                         const CharacterKnowledgeBase& kb,
                         const SpanExtractor& extractor) {
  if (!(config.rate > 0 && config.rate <= 1)) {
    throw ValidationError("rate must be in (0, 1]");
  }
  if (config.types.empty()) throw ValidationError("no perturbation types");
  const fs::path& dir = config.out;
  fs::create_directories(dir);
  const OrderedJson cfg =
      ConfigJson(config, extractor.tag, TablesChecksum(config.tables));
  const std::string cfg_text = cfg.dump(2) + "\n";
  if (!fs::exists(dir / kBuildConfigFile) ||
      ReadFile(dir / kBuildConfigFile) != cfg_text) {
    WriteFileAtomic(dir / kBuildConfigFile, cfg_text);
  }
  BuildSummary report;
  auto fingerprint = [&dir, &cfg](const char* stage,
                                  std::vector<std::string> inputs,
                                  std::vector<const char*> keys) {
    return [&dir, &cfg, stage, inputs, keys] {
      std::string all = std::string(stage) + "\n";
      for (const std::string& f : inputs) {
        all += f + "=" + FileSha(dir / f) + "\n";
      }
      for (const char* k : keys) all += std::string(k) + "=" + cfg[k].dump() + "\n";
      return Sha256Hex(all);
    };
  };

  RunStage(dir,
           {"01_base",
            fingerprint("01_base", {},
                        {"corpus_sha256", "seed", "toxic_n", "nontoxic_n"}),
            {kBaseFile},
            [&] {
              const auto corpus = LoadCorpus(config.corpus);
              size_t toxic = 0;
              for (const auto& c : corpus) toxic += c.label == Label::kToxic;
              const auto base = SampleBase(
                  corpus, config.toxic_n.value_or(toxic),
                  config.nontoxic_n.value_or(corpus.size() - toxic),
                  config.seed);
              WriteJsonl(dir / kBaseFile, ToJsonRows(base));
            }},
           report);

  RunStage(dir,
           {"02_spans", fingerprint("02_spans", {kBaseFile}, {"extractor"}),
            {kSpansFile},
            [&] {
              const auto base = ReadJsonl(dir / kBaseFile, &CorpusRecordFromJson);
              std::vector<SampleText> texts;
              for (const auto& c : base) {
                if (c.label == Label::kToxic) texts.push_back({c.id, c.text});
              }
              const auto results = extractor.run(texts);
              if (results.size() != texts.size()) {
                throw Error("extractor returned " +
                            std::to_string(results.size()) + " results for " +
                            std::to_string(texts.size()) + " texts");
              }
              std::vector<SpanRecord> spans;
              for (size_t i = 0; i < results.size(); ++i) {
                spans.push_back({texts[i].id, texts[i].text,
                                 std::string(ExtractionSourceName(results[i].source)),
                                 results[i].spans});
              }
              WriteJsonl(dir / kSpansFile, ToJsonRows(spans));
            }},
           report);

  RunStage(dir,
           {"03_perturb",
            fingerprint("03_perturb", {kBaseFile, kSpansFile},
                        {"kb_sha256", "seed", "rate", "types", "pinyin_case",
                         "shuffle_window"}),
            {kPerturbedFile, kSkipsFile},
            [&] {
              const auto spans = ReadJsonl(dir / kSpansFile, &SpanRecordFromJson);
              std::vector<BatchInput> inputs;
              for (const SpanRecord& s : spans) {
                inputs.push_back({s.id, s.text, Label::kToxic, s.spans});
              }
              PerturbConfig pc;
              pc.max_rate = config.rate;
              pc.seed = config.seed;
              pc.pinyin_case = config.pinyin_case;
              pc.shuffle_window = config.shuffle_window;
              const BatchResult batch = BatchPerturb(kb, inputs, config.types, pc);
              std::vector<OrderedJson> rows, skip_rows;
              for (const BatchRecord& b : batch.records) {
                rows.push_back(ToJson(FromBatch(b)));
              }
              for (const BatchSkip& s : batch.skips) {
                skip_rows.push_back({{"original_id", s.original_id},
                                     {"type", TypeFlag(s.type)},
                                     {"reason", s.reason},
                                     {"message", s.message}});
              }
              WriteJsonl(dir / kPerturbedFile, rows);
              WriteJsonl(dir / kSkipsFile, skip_rows);
            }},
           report);

  RunStage(dir,
           {"04_worksheet", fingerprint("04_worksheet", {kPerturbedFile}, {}),
            {kWorksheetFile},
            [&] {
              const auto perturbed =
                  ReadJsonl(dir / kPerturbedFile, &DatasetRecordFromJson);
              WriteFileAtomic(dir / kWorksheetFile,
                              AnnotationWorksheet(perturbed, {}));
            }},
           report);

  if (config.annotations) {
    const auto perturbed =
        ReadJsonl(dir / kPerturbedFile, &DatasetRecordFromJson);
    std::set<std::string> known;
    for (const auto& r : perturbed) known.insert(r.id);
    const std::string tsv = ReadFile(*config.annotations);
    ParseAnnotations(tsv, config.annotations->filename().string(), &known);
    if (!fs::exists(dir / kAnnotationsFile) ||
        ReadFile(dir / kAnnotationsFile) != tsv) {
      WriteFileAtomic(dir / kAnnotationsFile, tsv);
    }
  }

  RunStage(dir,
           {kFinalizeStage, [&dir] { return FinalizeFingerprint(dir); },
            {kDatasetFile, kManifestFile},
            [&] { Finalize(dir); }},
           report);
  report.manifest = OrderedJson::parse(ReadFile(dir / kManifestFile));
  return report;
}

void ExportAnnotations(const fs::path& data_dir, const fs::path& out_file) {
  const auto perturbed =
      ReadJsonl(data_dir / kPerturbedFile, &DatasetRecordFromJson);
  std::set<std::string> known;
  for (const auto& r : perturbed) known.insert(r.id);
  WriteFileAtomic(out_file, AnnotationWorksheet(
                                perturbed, LoadAnnotationsIfAny(data_dir, known)));
}

OrderedJson ImportAnnotations(const fs::path& data_dir, const fs::path& file) {
  const auto perturbed =
      ReadJsonl(data_dir / kPerturbedFile, &DatasetRecordFromJson);
  std::set<std::string> known;
  for (const auto& r : perturbed) known.insert(r.id);
  const std::string tsv = ReadFile(file);
  ParseAnnotations(tsv, file.filename().string(), &known);
  WriteFileAtomic(data_dir / kAnnotationsFile, tsv);
  const OrderedJson manifest = Finalize(data_dir);
  WriteFileAtomic(data_dir / ("." + std::string(kFinalizeStage) + ".done"),
                  FinalizeFingerprint(data_dir));
  return manifest;
}

}  // namespace forge
