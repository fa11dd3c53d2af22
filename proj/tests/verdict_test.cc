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

#include "forge/verdict.h"

#include <gtest/gtest.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "forge/hash.h"
#include "forge/records.h"
#include "test_support.h"

namespace forge {
namespace {

struct Case {
  std::string parser;  // "verdict" or "cacot"
  std::string reply;
  VerdictLabel label;
  std::optional<std::string> extracted;
};

// Hand-labelled answer key of reply styles seen from chat models.
const std::vector<Case>& Corpus() {
  static const auto* kCases = [] {
    auto* cases = new std::vector<Case>();
    std::istringstream in(
        ReadFile(testing::TestDataDir() / "reply_key.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
      const auto j = OrderedJson::parse(line);
      Case c;
      c.parser = j.at("parser").get<std::string>();
      c.reply = j.at("reply").get<std::string>();
      c.label = *ParseVerdictLabelName(j.at("label").get<std::string>());
      if (!j.at("extracted").is_null()) {
        c.extracted = j.at("extracted").get<std::string>();
      }
      cases->push_back(std::move(c));
    }
    return cases;
  }();
  return *kCases;
}

Verdict Parse(const Case& c) {
  return c.parser == "cacot" ? ParseCacot(c.reply) : ParseVerdict(c.reply);
}

TEST(ParseVerdictTest, AnswerKey) {
  ASSERT_GE(Corpus().size(), 30u);
  for (const Case& c : Corpus()) {
    const Verdict v = Parse(c);
    EXPECT_EQ(VerdictLabelName(v.label), VerdictLabelName(c.label))
        << "reply: " << c.reply;
    EXPECT_EQ(v.extracted, c.extracted) << "reply: " << c.reply;
    EXPECT_EQ(v.raw, c.reply);
  }
}

TEST(ParseVerdictTest, ExtractedOnlyWithToxicLabel) {
  for (const Case& c : Corpus()) {
    const Verdict v = Parse(c);
    if (v.label != VerdictLabel::kToxic) EXPECT_FALSE(v.extracted);
  }
}

TEST(ParseVerdictTest, TotalOnArbitraryBytes) {
  const std::vector<std::string> junk = {
      std::string("\xff\xfe\x00\x01", 4), "\xe4\xbd", "1\xc3", "\x80" "0",
      std::string(5000, '1'), "【】[]", "毒性内容是："};
  for (const std::string& s : junk) {
    const Verdict v = ParseVerdict(s);
    EXPECT_EQ(v.raw, s);
  }
}

TEST(ParseVerdictTest, LabelNamesRoundTrip) {
  for (VerdictLabel l : {VerdictLabel::kNonToxic, VerdictLabel::kToxic,
                         VerdictLabel::kUnparseable}) {
    EXPECT_EQ(ParseVerdictLabelName(VerdictLabelName(l)), l);
  }
  EXPECT_FALSE(ParseVerdictLabelName("2"));
}

TEST(ParseCacotTest, ThreeStagesBracketed) {
  const std::string reply =
      "【第一步】潜在毒性分析：句中“普信楠”可能是冒犯。\n"
      "【第二步】扰动还原：普信楠 -> 普信男。\n"
      "【第三步】判断：1，毒性内容是：普信楠";
  const Verdict v = ParseCacot(reply);
  EXPECT_EQ(v.label, VerdictLabel::kToxic);
  EXPECT_EQ(v.extracted, "普信楠");
  ASSERT_TRUE(v.stages);
  EXPECT_EQ(v.stages->analysis, "句中“普信楠”可能是冒犯。");
  EXPECT_EQ(v.stages->recovery, "普信楠 -> 普信男。");
  EXPECT_EQ(v.stages->judgment, "1，毒性内容是：普信楠");
}

TEST(ParseCacotTest, LabelComesFromStageThreeOnly) {
  const std::string reply =
      "[Step 1] the words 0 and 1 appear: 1\n"
      "[Step 2] nothing to recover, 1\n"
      "[Step 3] 0";
  const Verdict v = ParseCacot(reply);
  EXPECT_EQ(v.label, VerdictLabel::kNonToxic);
}

TEST(ParseCacotTest, MissingStageThreeIsUnparseable) {
  const Verdict v = ParseCacot("【第一步】分析：1\n【第二步】还原：无");
  EXPECT_EQ(v.label, VerdictLabel::kUnparseable);
  EXPECT_FALSE(v.extracted);
}

TEST(ParseCacotTest, DigitMarkers) {
  const Verdict v = ParseCacot("[第1步] a\n[第2步] b\n[第3步] 1");
  EXPECT_EQ(v.label, VerdictLabel::kToxic);
}

}  // namespace
}  // namespace forge
