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

#include <gtest/gtest.h>

#include <set>

#include "forge/dataset.h"
#include "forge/hash.h"
#include "forge/metrics.h"
#include "test_support.h"

namespace forge {
namespace {

namespace fs = std::filesystem;
using testing::DataDir;
using testing::TempDir;

// Built once: the shipped desk corpus with the fixture annotations.
const fs::path& DeskDataset() {
  static TempDir* dir = new TempDir();
  static const fs::path out = [] {
    const fs::path lexicon_path = DataDir() / "lexicon/toxic_terms.txt";
    static const ToxicLexicon lexicon = ToxicLexicon::Load(lexicon_path);
    DatasetConfig c;
    c.corpus = DataDir() / "desk/corpus.jsonl";
    c.tables = DataDir() / "tables";
    c.out = dir->path() / "ds";
    c.annotations = DataDir() / "desk/annotations.tsv";
    c.seed = 42;
    BuildDataset(c, testing::ShippedKb(),
                 LexiconExtractor(lexicon, Sha256File(lexicon_path)));
    return c.out;
  }();
  return out;
}

const PromptCatalog& Catalog() {
  static const PromptCatalog c = PromptCatalog::Load(DataDir() / "prompts");
  return c;
}

// Fails with a non-transient error for the listed sample ids.
class FailingBackend : public ChatBackend {
 public:
  FailingBackend(std::set<std::string> failing, std::string reply)
      : failing_(std::move(failing)), reply_(std::move(reply)) {}
  std::string Complete(const EndpointConfig&, const std::vector<Message>&,
                       const GenConfig&, const RequestContext& ctx) override {
    if (failing_.count(ctx.sample_id)) throw Error("backend refused");
    return reply_;
  }

 private:
  std::set<std::string> failing_;
  std::string reply_;
};

EndpointConfig MockEndpoint() {
  EndpointConfig e;
  e.name = "mock";
  e.model_id = "mock";
  e.max_concurrent = 4;
  return e;
}

TEST(LoadEvalSamplesTest, MirrorsTheDataset) {
  const auto samples = LoadEvalSamples(DeskDataset());
  const auto rows =
      ReadJsonl(DeskDataset() / kDatasetFile, &DatasetRecordFromJson);
  ASSERT_EQ(samples.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(samples[i].sample_id, rows[i].id);
    EXPECT_EQ(samples[i].gold, rows[i].label);
    if (samples[i].gold == Label::kToxic) {
      EXPECT_FALSE(samples[i].gold_entity.empty()) << samples[i].sample_id;
    } else {
      EXPECT_TRUE(samples[i].gold_entity.empty());
    }
  }
}

TEST(GoldEntityTest, PrefersTheSpanTouchedByAnEdit) {
  const std::vector<ToxicSpan> spans = {{0, 2, "傻逼"}, {5, 7, "废物"}};
  EXPECT_EQ(GoldEntity(spans, {{6, 7, "物", "勿"}}), "废物");
  EXPECT_EQ(GoldEntity(spans, {}), "傻逼");
  EXPECT_EQ(GoldEntity({}, {}), "");
}

TEST(RunEvalTest, AlwaysToxicModelDetectsEverything) {
  const auto samples = LoadEvalSamples(DeskDataset());
  ScriptedBackend backend(std::map<std::string, std::string>{{"*", "1"}});
  ChatClient client(backend, std::nullopt);
  const auto out =
      RunEval(client, MockEndpoint(), Catalog().Get("CN"), samples);
  ASSERT_EQ(out.records.size(), samples.size());
  EXPECT_EQ(out.failures, 0u);
  std::vector<VerdictLabel> toxic, clean;
  for (size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(out.records[i].sample_id, samples[i].sample_id);
    (samples[i].gold == Label::kToxic ? toxic : clean)
        .push_back(out.records[i].label);
  }
  EXPECT_EQ(DetectionRate(toxic), Rational(100));
  EXPECT_EQ(ErrorRate(clean), Rational(100));
}

TEST(RunEvalTest, CacotRepliesAreParsedByStage) {
  const auto samples = LoadEvalSamples(DeskDataset());
  ScriptedBackend backend(std::map<std::string, std::string>{
      {"*", "【第1步】句子\n【第2步】没有问题\n【第3步】0"}});
  ChatClient client(backend, std::nullopt);
  const auto out =
      RunEval(client, MockEndpoint(), Catalog().Get("CACOT"), samples);
  for (const auto& r : out.records) EXPECT_EQ(r.label, VerdictLabel::kNonToxic);
}

TEST(RunEvalTest, FewFailuresBecomeUnparseableRecords) {
  const auto samples = LoadEvalSamples(DeskDataset());
  FailingBackend backend({samples[0].sample_id, samples[5].sample_id}, "0");
  ChatClient client(backend, std::nullopt);
  const auto out =
      RunEval(client, MockEndpoint(), Catalog().Get("CN"), samples);
  EXPECT_EQ(out.failures, 2u);
  EXPECT_EQ(out.errors.size(), 2u);
  EXPECT_EQ(out.records[0].label, VerdictLabel::kUnparseable);
  EXPECT_EQ(out.records[5].label, VerdictLabel::kUnparseable);
  EXPECT_EQ(out.records[1].label, VerdictLabel::kNonToxic);
}

TEST(RunEvalTest, TooManyFailuresAbort) {
  const auto samples = LoadEvalSamples(DeskDataset());
  std::set<std::string> failing;
  for (size_t i = 0; i < samples.size(); i += 5) {
    failing.insert(samples[i].sample_id);
  }
  FailingBackend backend(failing, "0");
  ChatClient client(backend, std::nullopt);
  try {
    RunEval(client, MockEndpoint(), Catalog().Get("CN"), samples);
    FAIL() << "expected abort";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("aborting"), std::string::npos);
  }
  EvalOptions lenient;
  lenient.max_failure_fraction = 0.5;
  EXPECT_EQ(RunEval(client, MockEndpoint(), Catalog().Get("CN"), samples,
                    lenient)
                .failures,
            failing.size());
}

TEST(RunEvalTest, ExtractionTemplateIsRejected) {
  ScriptedBackend backend(std::map<std::string, std::string>{{"*", "1"}});
  ChatClient client(backend, std::nullopt);
  EXPECT_THROW(RunEval(client, MockEndpoint(), Catalog().Get("EXTRACT_FEWSHOT"),
                       LoadEvalSamples(DeskDataset())),
               ValidationError);
}

TEST(RunEvalTest, ConcurrencyDoesNotChangeResults) {
  const auto samples = LoadEvalSamples(DeskDataset());
  ScriptedBackend backend(
      ScriptedBackend::FromFile(DataDir() / "desk/mock_replies.jsonl"));
  ChatClient client(backend, std::nullopt);
  EndpointConfig serial = MockEndpoint();
  serial.max_concurrent = 1;
  EndpointConfig wide = MockEndpoint();
  wide.max_concurrent = 16;
  const auto a = RunEval(client, serial, Catalog().Get("CN"), samples);
  const auto b = RunEval(client, wide, Catalog().Get("CN"), samples);
  EXPECT_EQ(ToJsonRows(a.records), ToJsonRows(b.records));
}

}  // namespace
}  // namespace forge
