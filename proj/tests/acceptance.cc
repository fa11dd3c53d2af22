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

// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero if any criterion fails.
//
// Usage: forge_acceptance [--data DIR] [--test-data DIR]
// Criterion 8 runs only when FORGE_LIVE_CONFIG, FORGE_LIVE_ENDPOINT and
// FORGE_LIVE_DATA are set (INI config, endpoint name, built dataset dir).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "forge/char_kb.h"
#include "forge/chat.h"
#include "forge/cli.h"
#include "forge/config.h"
#include "forge/dataset.h"
#include "forge/eval.h"
#include "forge/extract.h"
#include "forge/finetune.h"
#include "forge/hash.h"
#include "forge/metrics.h"
#include "forge/perturb.h"
#include "forge/records.h"
#include "forge/rng.h"
#include "forge/utf8.h"
#include "forge/verdict.h"

namespace forge {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Paths {
  fs::path data = FORGE_DATA_DIR;
  fs::path test_data = FORGE_TEST_DATA_DIR;
};

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome Pass(std::string d) { return {Status::kPass, std::move(d)}; }
Outcome Fail(std::string d) { return {Status::kFail, std::move(d)}; }
Outcome Skip(std::string d) { return {Status::kSkip, std::move(d)}; }

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fixed(double v, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

class ScratchDir {
 public:
  ScratchDir() {
    path_ = fs::temp_directory_path() /
            ("forge_acceptance_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

ToxicSpan SpanOf(const std::string& text, const std::string& entity) {
  const std::u32string t = utf8::Decode(text);
  const std::u32string e = utf8::Decode(entity);
  const size_t pos = t.find(e);
  if (pos == std::u32string::npos) throw Error(entity + " not in " + text);
  return {pos, pos + e.size(), entity};
}

// 1. Taxonomy golden suite.
Outcome Golden(const CharacterKnowledgeBase& kb) {
  struct Case {
    PerturbationType type;
    const char* text;
    const char* entity;
    const char* expected;
  };
  const Case cases[] = {
      {PerturbationType::kVSim, "这不是普信楠么", "普信楠", "这不是谱言喃么"},
      {PerturbationType::kSplit, "他是日常精神病", "精神病",
       "他是日常米青礻申疒丙"},
      {PerturbationType::kTrad, "小红书一堆脑瘫", "脑瘫", "小红书一堆腦癱"},
      {PerturbationType::kPyInit, "真是婊子都不如", "婊子", "真是bz都不如"},
      {PerturbationType::kPyFull, "孽畜，快现形", "孽畜", "nie chu，快现形"},
      {PerturbationType::kHomo, "都是一些歪瓜裂枣", "歪瓜裂枣",
       "都是一些外挂列早"},
      {PerturbationType::kShuff, "没有任何舔狗值得可怜", "舔狗",
       "没有任舔何狗值得可怜"},
      {PerturbationType::kEmoji, "妈的，我算是知道了", "妈的",
       "🐴的，我算是知道了"},
  };
  const auto start = Clock::now();
  int ok = 0;
  std::string misses;
  for (const Case& c : cases) {
    PerturbConfig config;
    config.max_rate = 1.0;
    config.seed = 42;
    try {
      const auto s = Apply(kb, c.type, c.text, {SpanOf(c.text, c.entity)},
                           config);
      if (s.perturbed == c.expected) {
        ++ok;
        continue;
      }
      misses += " " + std::string(TypeName(c.type)) + "=" + s.perturbed;
    } catch (const std::exception& e) {
      misses += " " + std::string(TypeName(c.type)) + " threw " + e.what();
    }
  }
  const double secs = Seconds(start);
  const std::string detail = std::to_string(ok) + "/8 exact, " +
                             Fixed(secs) + " s (limit 1 s)" + misses;
  return ok == 8 && secs < 1.0 ? Pass(detail) : Fail(detail);
}

// 2. Budget property over randomized perturbations of the desk corpus.
Outcome Budget(const CharacterKnowledgeBase& kb, const Paths& paths) {
  const auto start = Clock::now();
  const auto lexicon = ToxicLexicon::Load(paths.data / "lexicon/toxic_terms.txt");
  std::vector<std::pair<std::string, std::vector<ToxicSpan>>> pool;
  for (const auto& r : LoadCorpus(paths.data / "desk/corpus.jsonl")) {
    if (r.label != Label::kToxic) continue;
    auto spans = ExtractWithLexicon(lexicon, {r.id, r.text}).spans;
    if (!spans.empty()) pool.emplace_back(r.text, std::move(spans));
  }
  SplitMix64 rng(20240601);
  constexpr int kTarget = 1000;
  int done = 0, attempts = 0, over = 0;
  double sum = 0, worst = 0;
  while (done < kTarget && attempts < 20 * kTarget) {
    ++attempts;
    const auto& [text, spans] = pool[rng.Below(pool.size())];
    PerturbConfig config;
    config.max_rate = 0.3;
    config.seed = rng.Next();
    const PerturbationType type = kAllPerturbationTypes[rng.Below(8)];
    try {
      const auto s = Apply(kb, type, text, spans, config);
      ++done;
      sum += s.ratio;
      worst = std::max(worst, s.ratio);
      // Exact check on the integer counts, no float slack.
      if (static_cast<int64_t>(s.covered) * 10 >
          static_cast<int64_t>(s.total) * 3) {
        ++over;
      }
    } catch (const PerturbError&) {
      // No applicable character for this (sentence, type); draw again.
    }
  }
  const double secs = Seconds(start);
  const double mean = done ? sum / done : 0;
  const std::string detail =
      std::to_string(done) + " perturbations, " + std::to_string(over) +
      " over 0.30, max " + Fixed(worst) + ", mean " + Fixed(mean) +
      " (band [0.21, 0.35]), " + Fixed(secs) + " s (limit 10 s)";
  const bool ok = done == kTarget && over == 0 && mean >= 0.21 &&
                  mean <= 0.35 && secs < 10.0;
  return ok ? Pass(detail) : Fail(detail);
}

// 3. Round-trip invariants on random KB entries.
Outcome RoundTrips(const CharacterKnowledgeBase& kb) {
  constexpr int kDraws = 500;
  std::vector<char32_t> all, splittable, simplified;
  for (const auto& [ch, e] : kb.entries()) {
    all.push_back(ch);
    if (!e.decomposition.empty()) splittable.push_back(ch);
    if (e.is_simplified) simplified.push_back(ch);
  }
  SplitMix64 rng(7);
  PerturbConfig full;
  full.max_rate = 1.0;
  auto single = [&](PerturbationType t, char32_t ch, uint64_t seed) {
    PerturbConfig c = full;
    c.seed = seed;
    const std::string text = utf8::Encode(ch);
    return Apply(kb, t, text, {{0, 1, text}}, c);
  };
  int split_bad = 0, trad_bad = 0, shuff_bad = 0, py_bad = 0, py_checked = 0;
  for (int i = 0; i < kDraws; ++i) {
    const char32_t ch = splittable[rng.Below(splittable.size())];
    const auto s = single(PerturbationType::kSplit, ch, rng.Next());
    const auto& rev = kb.reverse_split_index();
    const auto it = rev.find(utf8::Decode(s.perturbed));
    if (it == rev.end() || it->second != ch) ++split_bad;
  }
  for (int i = 0; i < kDraws; ++i) {
    const char32_t ch = simplified[rng.Below(simplified.size())];
    const auto s = single(PerturbationType::kTrad, ch, rng.Next());
    const std::u32string t = utf8::Decode(s.perturbed);
    if (t.size() != 1 || t[0] == ch || kb.ToSimplified(t[0]) != ch) {
      ++trad_bad;
    }
  }
  for (int i = 0; i < kDraws; ++i) {
    // Random sentence of KB characters with one random span.
    const size_t n = 6 + rng.Below(15);
    std::u32string text;
    for (size_t k = 0; k < n; ++k) text.push_back(all[rng.Below(all.size())]);
    const size_t len = 2 + rng.Below(3);
    const size_t begin = rng.Below(n - len + 1);
    PerturbConfig c;
    c.max_rate = 1.0;
    c.seed = rng.Next();
    try {
      const auto s = Apply(kb, PerturbationType::kShuff, utf8::Encode(text),
                           {{begin, begin + len, ""}}, c);
      std::multiset<char32_t> a(text.begin(), text.end());
      const std::u32string out = utf8::Decode(s.perturbed);
      std::multiset<char32_t> b(out.begin(), out.end());
      if (a != b || out == text) ++shuff_bad;
    } catch (const PerturbError&) {
      ++shuff_bad;
    }
  }
  for (int i = 0; i < kDraws; ++i) {
    const char32_t ch = all[rng.Below(all.size())];
    const uint64_t seed = rng.Next();
    const auto init = single(PerturbationType::kPyInit, ch, seed);
    const auto full_py = single(PerturbationType::kPyFull, ch, seed);
    ++py_checked;
    if (init.perturbed.empty() ||
        full_py.perturbed.compare(0, init.perturbed.size(), init.perturbed) !=
            0) {
      ++py_bad;
    }
  }
  const int bad = split_bad + trad_bad + shuff_bad + py_bad;
  const std::string detail =
      std::to_string(kDraws) + " draws each; violations split=" +
      std::to_string(split_bad) + " trad=" + std::to_string(trad_bad) +
      " shuff=" + std::to_string(shuff_bad) +
      " py_prefix=" + std::to_string(py_bad) + " (distinct pools: " +
      std::to_string(splittable.size()) + " splittable, " +
      std::to_string(simplified.size()) + " simplified, " +
      std::to_string(all.size()) + " total)";
  return bad == 0 ? Pass(detail) : Fail(detail);
}

// 4. Metrics against a brute-force recount, plus the scripted 6/2/2 run.
Outcome MetricsOracle(const Paths& paths) {
  SplitMix64 rng(99);
  int mismatches = 0;
  for (int set = 0; set < 100; ++set) {
    const size_t n = 2 + rng.Below(300);
    std::vector<ScoredSample> samples;
    for (size_t i = 0; i < n; ++i) {
      ScoredSample s;
      s.gold = i == 0 ? Label::kToxic
               : i == 1 ? Label::kNonToxic
                        : (rng.Below(2) ? Label::kToxic : Label::kNonToxic);
      s.predicted = static_cast<VerdictLabel>(rng.Below(3));
      samples.push_back(s);
    }
    int64_t tp = 0, fp = 0, fn = 0, pos = 0, neg = 0, flagged_pos = 0,
            flagged_neg = 0;
    std::vector<VerdictLabel> toxic, clean;
    for (const auto& s : samples) {
      const bool flagged = s.predicted == VerdictLabel::kToxic;
      if (s.gold == Label::kToxic) {
        ++pos;
        flagged ? ++tp : ++fn;
        flagged_pos += flagged;
        toxic.push_back(s.predicted);
      } else {
        ++neg;
        if (flagged) ++fp;
        flagged_neg += flagged;
        clean.push_back(s.predicted);
      }
    }
    // Harmonic mean of precision and recall, a different route to F1.
    Rational f1(0);
    if (tp > 0) {
      const Rational p(tp, tp + fp), r(tp, tp + fn);
      f1 = 2 * p * r / (p + r);
    }
    if (F1(Confusion(samples)) != f1) ++mismatches;
    if (DetectionRate(toxic) != Rational(100 * flagged_pos, pos)) ++mismatches;
    if (ErrorRate(clean) != Rational(100 * flagged_neg, neg)) ++mismatches;
  }

  // Scripted mock: 8 toxic samples (6 flagged), 4 clean samples (2 flagged).
  std::vector<EvalSample> samples;
  std::map<std::string, std::string> replies;
  for (int i = 0; i < 12; ++i) {
    EvalSample s;
    s.sample_id = "m" + std::to_string(i);
    s.original_id = s.sample_id;
    s.gold = i < 8 ? Label::kToxic : Label::kNonToxic;
    s.text = "样例句子" + std::to_string(i);
    samples.push_back(s);
    const bool flag = (i < 6) || (i >= 8 && i < 10);
    replies[s.sample_id] = flag ? "1，毒性内容是：样例" : "0，没有毒性内容";
  }
  ScriptedBackend backend(replies);
  ChatClient client(backend, std::nullopt);
  EndpointConfig endpoint;
  endpoint.name = endpoint.model_id = "mock";
  const PromptCatalog catalog = PromptCatalog::Load(paths.data / "prompts");
  const auto outcome = RunEval(client, endpoint, catalog.Get("CN"), samples);
  std::vector<ScoredSample> scored;
  for (size_t i = 0; i < samples.size(); ++i) {
    scored.push_back({samples[i].gold, outcome.records[i].label});
  }
  const ConfusionCounts counts = Confusion(scored);
  const Rational f1 = F1(counts);
  const std::string detail =
      "100 random sets, " + std::to_string(mismatches) +
      " mismatches; scripted mock tp=" + std::to_string(counts.tp) +
      " fp=" + std::to_string(counts.fp) + " fn=" + std::to_string(counts.fn) +
      " F1=" + FormatRational(f1);
  const bool ok = mismatches == 0 && counts.tp == 6 && counts.fp == 2 &&
                  counts.fn == 2 && f1 == Rational(3, 4);
  return ok ? Pass(detail) : Fail(detail);
}

// 5. Parser corpus against the hand-labelled key.
Outcome Parsers(const Paths& paths) {
  std::istringstream in(ReadFile(paths.test_data / "reply_key.jsonl"));
  std::string line;
  int total = 0, agree = 0, thrown = 0;
  std::set<std::string> kinds;
  std::string misses;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = OrderedJson::parse(line);
    ++total;
    const std::string parser = j.at("parser").get<std::string>();
    const std::string reply = j.at("reply").get<std::string>();
    kinds.insert(parser);
    try {
      const Verdict v =
          parser == "cacot" ? ParseCacot(reply) : ParseVerdict(reply);
      std::optional<std::string> want;
      if (!j.at("extracted").is_null()) {
        want = j.at("extracted").get<std::string>();
      }
      if (VerdictLabelName(v.label) == j.at("label").get<std::string>() &&
          v.extracted == want) {
        ++agree;
      } else {
        misses += " [" + reply.substr(0, 40) + "]";
      }
    } catch (...) {
      ++thrown;
    }
  }
  const std::string detail = std::to_string(agree) + "/" +
                             std::to_string(total) + " agree, " +
                             std::to_string(thrown) + " exceptions" + misses;
  return total >= 30 && agree == total && thrown == 0 && kinds.size() == 2
             ? Pass(detail)
             : Fail(detail);
}

int Cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::vector<const char*> argv = {"forge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, e;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, e);
  if (err) *err = e.str();
  return code;
}

// Runs build + eval + report under `root`; returns "" or an error.
std::string Pipeline(const Paths& paths, const fs::path& root) {
  const std::string d = paths.data.string();
  std::string err;
  if (Cli({"dataset", "build", "--corpus", d + "/desk/corpus.jsonl",
           "--tables", d + "/tables", "--lexicon",
           d + "/lexicon/toxic_terms.txt", "--annotations",
           d + "/desk/annotations.tsv", "--seed", "42", "--out",
           (root / "ds").string()},
          &err) != 0) {
    return "dataset build: " + err;
  }
  for (const char* tmpl : {"CN", "ENG", "CACOT"}) {
    if (Cli({"--mock", d + "/desk/mock_replies.jsonl", "eval", "--model",
             "mock-a", "--template", tmpl, "--data", (root / "ds").string(),
             "--out", (root / "res").string(), "--prompts", d + "/prompts",
             "--seed", "42"},
            &err) != 0) {
      return std::string("eval ") + tmpl + ": " + err;
    }
  }
  if (Cli({"--mock", d + "/desk/mock_replies.jsonl", "eval", "--model",
           "mock-a", "--template", "CN", "--icl", d + "/icl/examples.jsonl",
           "--data", (root / "ds").string(), "--out", (root / "res").string(),
           "--prompts", d + "/prompts", "--seed", "42"},
          &err) != 0) {
    return "eval CN+ICL: " + err;
  }
  if (Cli({"report", "--in", (root / "res").string(), "--out",
           (root / "rep").string(), "--seed", "42"},
          &err) != 0) {
    return "report: " + err;
  }
  return "";
}

// 6. End-to-end determinism.
Outcome EndToEnd(const Paths& paths) {
  ScratchDir a, b;
  double slowest = 0;
  for (const ScratchDir* dir : {&a, &b}) {
    const auto start = Clock::now();
    const std::string err = Pipeline(paths, dir->path());
    if (!err.empty()) return Fail(err);
    slowest = std::max(slowest, Seconds(start));
  }
  // Record files and report tables; manifests embed absolute paths.
  std::vector<fs::path> files = {"ds/01_base.jsonl", "ds/02_spans.jsonl",
                                 "ds/03_perturbed.jsonl", "ds/dataset.jsonl",
                                 "rep/report.tsv", "rep/report.txt"};
  for (const auto& e : fs::directory_iterator(a.path() / "res")) {
    if (e.path().extension() == ".jsonl") {
      files.push_back(fs::path("res") / e.path().filename());
    }
  }
  int differing = 0;
  std::string names;
  for (const fs::path& f : files) {
    if (!fs::exists(b.path() / f) ||
        ReadFile(a.path() / f) != ReadFile(b.path() / f)) {
      ++differing;
      names += " " + f.string();
    }
  }
  const std::string detail =
      std::to_string(files.size()) + " files compared, " +
      std::to_string(differing) + " differ" + names + "; slowest run " +
      Fixed(slowest) + " s (limit 30 s)";
  return differing == 0 && files.size() >= 10 && slowest < 30.0
             ? Pass(detail)
             : Fail(detail);
}

// 7. Fine-tune export at the standard grid sizes.
Outcome FineTune(const Paths& paths) {
  ScratchDir dir;
  const std::string err = Pipeline(paths, dir.path());
  if (!err.empty()) return Fail(err);
  std::string detail;
  bool ok = true;
  for (int n : kFinetuneGrid) {
    const fs::path out = dir.path() / ("ft" + std::to_string(n) + ".jsonl");
    std::string cli_err;
    if (Cli({"export-ft", "--data", (dir.path() / "ds").string(), "--n",
             std::to_string(n), "--out", out.string(), "--prompts",
             (paths.data / "prompts").string(), "--seed", "42"},
            &cli_err) != 0) {
      return Fail("export-ft n=" + std::to_string(n) + ": " + cli_err);
    }
    int lines = 0;
    bool schema = true;
    std::istringstream in(ReadFile(out));
    std::string line;
    while (std::getline(in, line)) {
      ++lines;
      const auto j = OrderedJson::parse(line);
      const auto& m = j.at("messages");
      schema = schema && m.size() == 3 && m[0]["role"] == "system" &&
               m[1]["role"] == "user" && m[2]["role"] == "assistant";
      for (const auto& msg : m) {
        schema = schema && msg["content"].is_string() &&
                 !msg["content"].get<std::string>().empty();
      }
    }
    const auto hp = OrderedJson::parse(ReadFile(SidecarPath(out)));
    const auto& h = hp.at("hyperparameters");
    const bool sidecar =
        h.at("batch_size") == 16 && h.at("epochs") == 3 &&
        h.at("learning_rate_multiplier").get<double>() == 0.1 &&
        h.at("presence_penalty").get<double>() == 0.0 &&
        h.at("frequency_penalty").get<double>() == 0.0;
    const auto selected = SelectFinetuneSamples(
        FinetuneCandidates(dir.path() / "ds"), n, 42);
    const bool round_trip = ImportFinetune(out) == selected;
    const bool this_ok = lines == n && schema && sidecar && round_trip;
    ok = ok && this_ok;
    detail += (detail.empty() ? "" : "; ") + std::string("n=") +
              std::to_string(n) + ": " + std::to_string(lines) + " records" +
              (schema ? "" : ", schema error") +
              (sidecar ? "" : ", sidecar mismatch") +
              (round_trip ? ", round-trips" : ", round-trip mismatch");
  }
  return ok ? Pass(detail) : Fail(detail);
}

// 8. Directional live smoke; opt-in.
Outcome Live() {
  const char* config = std::getenv("FORGE_LIVE_CONFIG");
  const char* endpoint_name = std::getenv("FORGE_LIVE_ENDPOINT");
  const char* data = std::getenv("FORGE_LIVE_DATA");
  if (!config || !endpoint_name || !data) {
    return Skip(
        "network-gated; set FORGE_LIVE_CONFIG, FORGE_LIVE_ENDPOINT and "
        "FORGE_LIVE_DATA to run");
  }
  const FileConfig file = LoadConfig(config);
  const auto it = file.endpoints.find(endpoint_name);
  if (it == file.endpoints.end()) {
    return Fail(std::string("no endpoint ") + endpoint_name + " in " + config);
  }
  std::vector<EvalSample> base, homo;
  for (const auto& s : LoadEvalSamples(data)) {
    if (s.gold != Label::kToxic) continue;
    if (!s.type) base.push_back(s);
    if (s.type == PerturbationType::kHomo) homo.push_back(s);
  }
  if (base.size() < 100 || homo.size() < 100) {
    return Fail("slices too small: base " + std::to_string(base.size()) +
                ", homo " + std::to_string(homo.size()) + " (need 100 each)");
  }
  HttpChatBackend backend;
  const fs::path cache =
      file.Get("cache_dir").value_or((fs::path(data) / ".live-cache").string());
  ChatClient client(backend, fs::path(cache));
  const PromptCatalog catalog =
      PromptCatalog::Load(file.Get("prompts").value_or(
          (fs::path(FORGE_DATA_DIR) / "prompts").string()));
  const auto& tmpl = catalog.Get(file.Get("template").value_or("CN"));
  auto rate = [&](const std::vector<EvalSample>& slice) {
    std::vector<VerdictLabel> labels;
    for (const auto& r : RunEval(client, it->second, tmpl, slice).records) {
      labels.push_back(r.label);
    }
    return DetectionRate(labels);
  };
  const Rational b = rate(base), h = rate(homo);
  const std::string detail = "base " + FormatRational(b) + " vs Homo " +
                             FormatRational(h) + " on " +
                             std::to_string(base.size()) + "/" +
                             std::to_string(homo.size()) + " samples";
  return b - h >= 10 ? Pass(detail) : Fail(detail);
}

}  // namespace
}  // namespace forge

int main(int argc, char** argv) {
  using namespace forge;
  Paths paths;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--data") {
      paths.data = argv[i + 1];
    } else if (flag == "--test-data") {
      paths.test_data = argv[i + 1];
    } else {
      std::cerr << "unknown flag " << flag << "\n";
      return kExitUsage;
    }
  }
  const auto kb = CharacterKnowledgeBase::LoadDirectory(paths.data / "tables");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria =
      {
          {"1 taxonomy golden suite", [&] { return Golden(kb); }},
          {"2 budget property", [&] { return Budget(kb, paths); }},
          {"3 round-trip invariants", [&] { return RoundTrips(kb); }},
          {"4 metrics oracle", [&] { return MetricsOracle(paths); }},
          {"5 parser corpus", [&] { return Parsers(paths); }},
          {"6 end-to-end determinism", [&] { return EndToEnd(paths); }},
          {"7 fine-tune export", [&] { return FineTune(paths); }},
          {"8 directional live smoke", [&] { return Live(); }},
      };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = Fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::kPass   ? "PASS"
                      : o.status == Status::kSkip ? "SKIP"
                                                  : "FAIL";
    failed += o.status == Status::kFail;
    std::cout << "[" << tag << "] " << name << ": " << o.detail << "\n";
  }
  std::cout << (failed ? "FAILED " : "OK ") << failed << " criteria failed\n";
  return failed ? 1 : 0;
}
