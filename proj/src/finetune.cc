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

#include "forge/finetune.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>

#include "forge/dataset.h"
#include "forge/hash.h"
#include "forge/rng.h"
#include "forge/utf8.h"
#include "forge/verdict.h"

namespace forge {
namespace {

std::string SpanText(const DatasetRecord& r,
                     const std::vector<ToxicSpan>& spans) {
  const std::u32string text = utf8::Decode(r.text);
  std::string out;
  for (const ToxicSpan& s : spans) {
    const auto [a, b] = MapRange(r.edits, s.start, s.end);
    if (b > text.size() || a >= b) continue;
    if (!out.empty()) out += "，";
    out += utf8::Encode(text.substr(a, b - a));
  }
  return out;
}

}  // namespace

std::pair<size_t, size_t> MapRange(const std::vector<RecordEdit>& edits,
                                   size_t start, size_t end) {
  std::vector<const RecordEdit*> sorted;
  for (const RecordEdit& e : edits) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const RecordEdit* a, const RecordEdit* b) {
              return a->start < b->start;
            });
  auto map = [&](size_t pos, bool is_end) {
    int64_t shift = 0;
    for (const RecordEdit* e : sorted) {
      const int64_t repl =
          static_cast<int64_t>(utf8::Decode(e->replacement).size());
      const int64_t len = static_cast<int64_t>(e->end - e->start);
      if (e->end <= pos && !(is_end && e->start == pos && len == 0)) {
        shift += repl - len;
      } else if (e->start < pos) {
        return static_cast<size_t>(static_cast<int64_t>(e->start) + shift +
                                   (is_end ? repl : 0));
      } else {
        break;
      }
    }
    return static_cast<size_t>(static_cast<int64_t>(pos) + shift);
  };
  return {map(start, false), map(end, true)};
}

std::vector<FinetuneSample> FinetuneCandidates(
    const std::filesystem::path& data_dir) {
  std::map<std::string, std::vector<ToxicSpan>> spans;
  for (const SpanRecord& s :
       ReadJsonl(data_dir / kSpansFile, &SpanRecordFromJson)) {
    spans[s.id] = s.spans;
  }
  std::vector<FinetuneSample> out;
  for (const DatasetRecord& r :
       ReadJsonl(data_dir / kDatasetFile, &DatasetRecordFromJson)) {
    FinetuneSample s{r.id, r.text, r.label, std::nullopt};
    if (r.label == Label::kToxic) {
      auto it = spans.find(r.original_id);
      if (it != spans.end()) {
        std::string t = SpanText(r, it->second);
        if (!t.empty()) s.toxic_text = std::move(t);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FinetuneSample> SelectFinetuneSamples(
    const std::vector<FinetuneSample>& candidates, size_t n, uint64_t seed) {
  if (n == 0) throw ValidationError("fine-tuning sample size must be positive");
  if (candidates.size() < n) {
    throw ValidationError("only " + std::to_string(candidates.size()) +
                          " labelled samples, " + std::to_string(n) +
                          " requested");
  }
  std::vector<FinetuneSample> pool = candidates;
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  SplitMix64 rng(DeriveSeed(seed, "finetune", n));
  rng.Shuffle(pool);
  pool.resize(n);
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  return pool;
}

std::string AssistantVerdict(const FinetuneSample& s, PromptLanguage lang) {
  const bool zh = lang == PromptLanguage::kZh;
  if (s.label == Label::kNonToxic) {
    return zh ? "0，没有毒性内容" : "0, no toxic content";
  }
  if (!s.toxic_text) return "1";
  return (zh ? "1，毒性内容是：" : "1, toxic content is: ") + *s.toxic_text;
}

std::filesystem::path SidecarPath(const std::filesystem::path& training_file) {
  std::filesystem::path p = training_file;
  p.replace_extension(".hparams.json");
  return p;
}

void ExportFinetune(const std::vector<FinetuneSample>& samples,
                    const PromptTemplate& tmpl,
                    const std::filesystem::path& out_path, uint64_t seed,
                    const FinetuneHyperparameters& hp) {
  if (samples.empty()) {
    throw ValidationError("fine-tuning sample size must be positive");
  }
  if (tmpl.parser != ReplyParser::kVerdict) {
    throw ValidationError("template " + tmpl.id +
                          " is not a plain detection template");
  }
  const int n = static_cast<int>(samples.size());
  if (std::find(std::begin(kFinetuneGrid), std::end(kFinetuneGrid), n) ==
      std::end(kFinetuneGrid)) {
    spdlog::warn("fine-tuning with {} samples; the standard grid is 10, 20, 40",
                 n);
  }
  std::vector<OrderedJson> rows;
  OrderedJson ids = OrderedJson::array();
  for (const FinetuneSample& s : samples) {
    const auto prompt = RenderPrompt(tmpl, s.text);
    OrderedJson messages = OrderedJson::array();
    for (const Message& m : prompt) {
      messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    messages.push_back(
        {{"role", "assistant"}, {"content", AssistantVerdict(s, tmpl.language)}});
    rows.push_back({{"messages", messages}});
    ids.push_back(s.sample_id);
  }
  WriteJsonl(out_path, rows);
  OrderedJson sidecar = {
      {"training_file", out_path.filename().string()},
      {"training_sha256", Sha256File(out_path)},
      {"n", n},
      {"template", tmpl.id},
      {"seed", seed},
      {"standard_grid", kFinetuneGrid},
      {"hyperparameters",
       {{"batch_size", hp.batch_size},
        {"epochs", hp.epochs},
        {"learning_rate_multiplier", hp.learning_rate_multiplier},
        {"presence_penalty", hp.presence_penalty},
        {"frequency_penalty", hp.frequency_penalty},
        {"temperature", hp.temperature},
        {"top_p", hp.top_p}}},
      {"sample_ids", ids}};
  WriteFileAtomic(SidecarPath(out_path), sidecar.dump(2) + "\n");
}

std::vector<FinetuneSample> ImportFinetune(
    const std::filesystem::path& training_file) {
  const auto rows = ReadJsonlRaw(training_file);
  std::vector<std::string> ids;
  const auto sidecar_path = SidecarPath(training_file);
  if (std::filesystem::exists(sidecar_path)) {
    const OrderedJson sidecar = OrderedJson::parse(ReadFile(sidecar_path));
    ids = sidecar.at("sample_ids").get<std::vector<std::string>>();
    if (ids.size() != rows.size()) {
      throw ValidationError("sidecar lists " + std::to_string(ids.size()) +
                            " samples but the training file has " +
                            std::to_string(rows.size()));
    }
  }
  std::vector<FinetuneSample> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    const std::string where = training_file.filename().string() + " record " +
                              std::to_string(i + 1) + ": ";
    const OrderedJson& row = rows[i];
    if (!row.contains("messages") || !row["messages"].is_array() ||
        row["messages"].size() != 3) {
      throw ValidationError(where + "expected three messages");
    }
    const auto& m = row["messages"];
    const char* roles[] = {"system", "user", "assistant"};
    for (int k = 0; k < 3; ++k) {
      if (!m[k].contains("role") || m[k]["role"] != roles[k] ||
          !m[k].contains("content") || !m[k]["content"].is_string()) {
        throw ValidationError(where + "message " + std::to_string(k + 1) +
                              " must be a " + roles[k] + " message");
      }
    }
    std::string user = m[1]["content"].get<std::string>();
    for (const std::string prefix : {"句子：", "Sentence: "}) {
      if (user.rfind(prefix, 0) == 0) {
        user = user.substr(prefix.size());
        break;
      }
    }
    const Verdict v = ParseVerdict(m[2]["content"].get<std::string>());
    if (v.label == VerdictLabel::kUnparseable) {
      throw ValidationError(where + "assistant reply has no verdict");
    }
    FinetuneSample s;
    s.sample_id = ids.empty() ? std::to_string(i + 1) : ids[i];
    s.text = user;
    s.label = v.label == VerdictLabel::kToxic ? Label::kToxic : Label::kNonToxic;
    s.toxic_text = v.extracted;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace forge
