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

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "forge/hash.h"
#include "test_support.h"

namespace forge {
namespace {

namespace fs = std::filesystem;
using testing::DataDir;
using testing::TempDir;

// Ids sort in corpus order; the first `toxic` records are toxic.
std::vector<CorpusRecord> MakeCorpus(size_t toxic, size_t clean) {
  std::vector<CorpusRecord> out;
  for (size_t i = 0; i < toxic + clean; ++i) {
    out.push_back({"r" + std::to_string(100 + i), "句子" + std::to_string(i),
                   i < toxic ? Label::kToxic : Label::kNonToxic, ""});
  }
  return out;
}

TEST(SampleBaseTest, ExactCountsPerLabel) {
  const auto corpus = MakeCorpus(40, 60);
  const auto s = SampleBase(corpus, 10, 20, 7);
  ASSERT_EQ(s.size(), 30u);
  size_t toxic = 0;
  std::set<std::string> ids;
  for (const auto& r : s) {
    toxic += r.label == Label::kToxic;
    ids.insert(r.id);
  }
  EXPECT_EQ(toxic, 10u);
  EXPECT_EQ(ids.size(), 30u);
}

TEST(SampleBaseTest, DeterministicAndSeedSensitive) {
  const auto corpus = MakeCorpus(40, 60);
  const auto a = SampleBase(corpus, 10, 20, 7);
  const auto b = SampleBase(corpus, 10, 20, 7);
  const auto c = SampleBase(corpus, 10, 20, 8);
  auto ids = [](const std::vector<CorpusRecord>& v) {
    std::vector<std::string> out;
    for (const auto& r : v) out.push_back(r.id);
    return out;
  };
  EXPECT_EQ(ids(a), ids(b));
  EXPECT_NE(ids(a), ids(c));
}

TEST(SampleBaseTest, KeepsCorpusOrder) {
  const auto s = SampleBase(MakeCorpus(40, 60), 10, 20, 3);
  for (size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1].id, s[i].id);
}

TEST(SampleBaseTest, TooSmallCorpusIsRejected) {
  EXPECT_THROW(SampleBase(MakeCorpus(5, 5), 6, 1, 0), ValidationError);
  EXPECT_THROW(SampleBase(MakeCorpus(5, 5), 1, 6, 0), ValidationError);
  EXPECT_EQ(SampleBase(MakeCorpus(5, 5), 5, 5, 0).size(), 10u);
}

TEST(LoadCorpusTest, RejectsDuplicateIdsAndEmptyText) {
  TempDir dir;
  const auto dup = dir.Write(
      "dup.jsonl",
      "{\"id\":\"a\",\"text\":\"你好\",\"label\":\"toxic\"}\n"
      "{\"id\":\"a\",\"text\":\"再见\",\"label\":\"toxic\"}\n");
  EXPECT_THROW(LoadCorpus(dup), ValidationError);
  const auto empty = dir.Write(
      "empty.jsonl", "{\"id\":\"a\",\"text\":\"\",\"label\":\"toxic\"}\n");
  EXPECT_THROW(LoadCorpus(empty), ValidationError);
  EXPECT_EQ(LoadCorpus(DataDir() / "desk/corpus.jsonl").size(), 50u);
}

std::vector<AnnotationRecord> Scores(
    const std::vector<std::pair<std::string, int>>& rows) {
  std::vector<AnnotationRecord> out;
  std::map<std::string, int> seen;
  for (const auto& [id, score] : rows) {
    out.push_back({id, score, std::nullopt,
                   "ann" + std::to_string(seen[id]++)});
  }
  return out;
}

TEST(FilterReadabilityTest, MeanAgainstThreshold) {
  const auto out = FilterReadability(
      {"a", "b", "c", "d", "e"},
      Scores({{"a", 4}, {"a", 4}, {"b", 2}, {"b", 3}, {"c", 3}, {"c", 3},
              {"d", 5}, {"d", 1}}));
  EXPECT_EQ(out.kept, (std::vector<std::string>{"a", "c", "d"}));
  EXPECT_EQ(out.discarded, (std::vector<std::string>{"b"}));
  EXPECT_EQ(out.pending, (std::vector<std::string>{"e"}));
  EXPECT_EQ(out.mean.at("a"), Rational(4));
  EXPECT_EQ(out.mean.at("b"), Rational(5, 2));
  EXPECT_EQ(out.mean.count("e"), 0u);
}

TEST(FilterReadabilityTest, ThresholdIsConfigurable) {
  const auto a = Scores({{"x", 4}, {"x", 3}});
  EXPECT_EQ(FilterReadability({"x"}, a, 3).kept.size(), 1u);
  EXPECT_EQ(FilterReadability({"x"}, a, 4).discarded.size(), 1u);
}

TEST(ParseAnnotationsTest, AcceptsWorksheetShape) {
  const std::string tsv =
      "sample_id\ttext\treadability\textraction_ok\tannotator\n"
      "a#vsim\t句\t4\t1\tann1\n"
      "a#vsim\t句\t5\t\tann2\n"
      "b#trad\t句\t\t\t\n";
  const std::set<std::string> known = {"a#vsim", "b#trad"};
  const auto rows = ParseAnnotations(tsv, "w.tsv", &known);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].readability, 4);
  EXPECT_EQ(rows[0].extraction_ok, true);
  EXPECT_FALSE(rows[1].extraction_ok.has_value());
}

TEST(ParseAnnotationsTest, RejectsBadRows) {
  const std::set<std::string> known = {"a"};
  const std::string header = "sample_id\treadability\tannotator\n";
  EXPECT_THROW(ParseAnnotations(header + "a\t6\tx\n", "f", &known),
               ValidationError);
  EXPECT_THROW(ParseAnnotations(header + "a\t0\tx\n", "f", &known),
               ValidationError);
  EXPECT_THROW(ParseAnnotations(header + "a\tgood\tx\n", "f", &known),
               ValidationError);
  EXPECT_THROW(ParseAnnotations(header + "zzz\t3\tx\n", "f", &known),
               ValidationError);
  EXPECT_THROW(ParseAnnotations(header + "a\t3\t\n", "f", &known),
               ValidationError);
  EXPECT_THROW(ParseAnnotations(header + "a\t3\tx\na\t4\tx\n", "f", &known),
               ValidationError);
  EXPECT_THROW(ParseAnnotations("sample_id\ttext\n", "f", &known),
               ValidationError);
}

class BuildDatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    lexicon_path_ = DataDir() / "lexicon/toxic_terms.txt";
    lexicon_.emplace(ToxicLexicon::Load(lexicon_path_));
    config_.corpus = DataDir() / "desk/corpus.jsonl";
    config_.tables = DataDir() / "tables";
    config_.out = dir_.path() / "ds";
    config_.seed = 42;
  }

  BuildSummary Build() {
    return BuildDataset(config_, testing::ShippedKb(),
                        LexiconExtractor(*lexicon_, Sha256File(lexicon_path_)));
  }

  std::vector<DatasetRecord> Perturbed() const {
    return ReadJsonl(config_.out / kPerturbedFile, &DatasetRecordFromJson);
  }

  TempDir dir_;
  fs::path lexicon_path_;
  std::optional<ToxicLexicon> lexicon_;
  DatasetConfig config_;
};

TEST_F(BuildDatasetTest, WithoutAnnotationsEverythingIsPending) {
  const auto s = Build();
  EXPECT_EQ(s.ran.size(), 5u);
  const auto& m = s.manifest;
  EXPECT_EQ(m["status"], "awaiting_annotations");
  EXPECT_EQ(m["totals"]["pending"], m["totals"]["perturbed"]);
  EXPECT_EQ(m["totals"]["kept"], 0);
  // dataset.jsonl holds only the unperturbed base records for now.
  EXPECT_EQ(m["dataset"]["records"], 50);
  EXPECT_EQ(m["base"]["toxic"], 25);
  EXPECT_EQ(m["base"]["non_toxic"], 25);
}

TEST_F(BuildDatasetTest, PerturbedRecordsRespectTheCap) {
  Build();
  const auto recs = Perturbed();
  ASSERT_FALSE(recs.empty());
  for (const auto& r : recs) {
    EXPECT_LE(r.ratio, config_.rate + 1e-12) << r.id;
    EXPECT_EQ(r.label, Label::kToxic);
    ASSERT_TRUE(r.type.has_value());
    EXPECT_EQ(r.id, r.original_id + "#" + std::string(TypeFlag(*r.type)));
    EXPECT_FALSE(r.edits.empty()) << r.id;
  }
}

TEST_F(BuildDatasetTest, ManifestTalliesAreConsistent) {
  config_.annotations = DataDir() / "desk/annotations.tsv";
  const auto m = Build().manifest;
  EXPECT_EQ(m["status"], "complete");
  const auto& t = m["totals"];
  EXPECT_EQ(t["kept"].get<size_t>() + t["discarded"].get<size_t>() +
                t["pending"].get<size_t>(),
            t["perturbed"].get<size_t>());
  size_t perturbed = 0, kept = 0, skipped = 0;
  for (const auto& [flag, tally] : m["per_type"].items()) {
    perturbed += tally["perturbed"].get<size_t>();
    kept += tally["kept"].get<size_t>();
    skipped += tally["skipped"].get<size_t>();
  }
  EXPECT_EQ(perturbed, t["perturbed"].get<size_t>());
  EXPECT_EQ(kept, t["kept"].get<size_t>());
  EXPECT_EQ(skipped, t["skipped"].get<size_t>());
  size_t reasons = 0;
  for (const auto& [reason, n] : m["skip_reasons"].items()) {
    reasons += n.get<size_t>();
  }
  EXPECT_EQ(reasons, skipped);
  EXPECT_EQ(m["dataset"]["records"].get<size_t>(), 50 + kept);
  const auto rows = ReadJsonl(config_.out / kDatasetFile, &DatasetRecordFromJson);
  EXPECT_EQ(rows.size(), 50 + kept);
  EXPECT_EQ(Perturbed().size(), perturbed);
  EXPECT_TRUE(m["corpus_mean_ratio_within_cap"].get<bool>());
}

TEST_F(BuildDatasetTest, KeptSamplesHaveMeanReadabilityAtThreshold) {
  config_.annotations = DataDir() / "desk/annotations.tsv";
  Build();
  const auto annotations = ParseAnnotations(
      ReadFile(*config_.annotations), "annotations.tsv");
  std::map<std::string, std::pair<int, int>> sums;
  for (const auto& a : annotations) {
    sums[a.sample_id].first += a.readability;
    sums[a.sample_id].second += 1;
  }
  for (const auto& r :
       ReadJsonl(config_.out / kDatasetFile, &DatasetRecordFromJson)) {
    if (!r.type) continue;
    const auto [sum, n] = sums.at(r.id);
    EXPECT_GE(sum, 3 * n) << r.id;
  }
}

TEST_F(BuildDatasetTest, RerunSkipsCompletedStages) {
  Build();
  const std::string first = ReadFile(config_.out / kDatasetFile);
  const auto again = Build();
  EXPECT_TRUE(again.ran.empty());
  EXPECT_EQ(again.skipped.size(), 5u);
  EXPECT_EQ(ReadFile(config_.out / kDatasetFile), first);
}

TEST_F(BuildDatasetTest, ChangedRateRerunsFromPerturbation) {
  Build();
  config_.rate = 0.5;
  const auto s = Build();
  EXPECT_EQ(s.skipped, (std::vector<std::string>{"01_base", "02_spans"}));
  for (const auto& r : Perturbed()) EXPECT_LE(r.ratio, 0.5 + 1e-12);
}

TEST_F(BuildDatasetTest, MissingOutputForcesRerun) {
  Build();
  const std::string spans = ReadFile(config_.out / kSpansFile);
  fs::remove(config_.out / kSpansFile);
  const auto s = Build();
  // The regenerated file is identical, so later stages stay up to date.
  EXPECT_EQ(s.ran, (std::vector<std::string>{"02_spans"}));
  EXPECT_EQ(ReadFile(config_.out / kSpansFile), spans);
}

TEST_F(BuildDatasetTest, RebuildIsByteIdentical) {
  config_.annotations = DataDir() / "desk/annotations.tsv";
  Build();
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(config_.out)) {
    first[e.path().filename().string()] = ReadFile(e.path());
  }
  fs::remove_all(config_.out);
  Build();
  for (const auto& [name, bytes] : first) {
    EXPECT_EQ(ReadFile(config_.out / name), bytes) << name;
  }
}

TEST_F(BuildDatasetTest, StageErrorsNameTheStage) {
  config_.corpus = dir_.Write("bad.jsonl", "{\"id\":\"x\"}\n");
  try {
    Build();
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("stage 01_base"), std::string::npos)
        << e.what();
  }
}

TEST_F(BuildDatasetTest, ExportThenImportCompletesTheDataset) {
  Build();
  const fs::path sheet = dir_.path() / "sheet.tsv";
  ExportAnnotations(config_.out, sheet);
  std::istringstream in(ReadFile(sheet));
  std::string line, filled;
  std::getline(in, line);
  filled = line + "\n";
  int i = 0;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    const auto tab2 = line.find('\t', tab + 1);
    const std::string head = line.substr(0, tab2);
    // Every fifth sample gets poor scores.
    const int score = i++ % 5 == 0 ? 2 : 4;
    filled += head + "\t" + std::to_string(score) + "\t1\tann1\n";
    filled += head + "\t" + std::to_string(score) + "\t\tann2\n";
  }
  const auto m = ImportAnnotations(config_.out, dir_.Write("f.tsv", filled));
  EXPECT_EQ(m["status"], "complete");
  const size_t perturbed = m["totals"]["perturbed"].get<size_t>();
  EXPECT_EQ(m["discard_count"].get<size_t>(), (perturbed + 4) / 5);
  EXPECT_EQ(m["pending_count"], 0);
  // The import is picked up by later builds without rerunning anything.
  EXPECT_TRUE(Build().ran.empty());
  // Re-exporting carries the imported scores.
  ExportAnnotations(config_.out, sheet);
  EXPECT_NE(ReadFile(sheet).find("\tann2"), std::string::npos);
}

TEST(AnnotationWorksheetTest, BlankRowsForUnannotatedSamples) {
  DatasetRecord a;
  a.id = "x#vsim";
  a.text = "文本";
  DatasetRecord b;
  b.id = "y#trad";
  b.text = "另一";
  const std::string sheet =
      AnnotationWorksheet({a, b}, {{"x#vsim", 4, true, "ann"}});
  EXPECT_EQ(sheet,
            "sample_id\ttext\treadability\textraction_ok\tannotator\n"
            "x#vsim\t文本\t4\t1\tann\n"
            "y#trad\t另一\t\t\t\n");
}

}  // namespace
}  // namespace forge
