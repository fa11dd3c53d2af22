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

#include "forge/cli.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "forge/batch.h"
#include "forge/char_kb.h"
#include "forge/chat.h"
#include "forge/config.h"
#include "forge/dataset.h"
#include "forge/eval.h"
#include "forge/extract.h"
#include "forge/finetune.h"
#include "forge/hash.h"
#include "forge/parallel.h"
#include "forge/prompts.h"
#include "forge/records.h"
#include "forge/report.h"
#include "forge/utf8.h"

namespace forge {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config;
  std::string mock;
  std::string cache_dir;
};

// Values of one subcommand's options; unset strings mean "not given".
struct Options {
  std::string tables, corpus, lexicon, prompts, spans, in, out, data;
  std::string annotations, model, template_id, icl, overrides, extract_model;
  std::vector<std::string> types;
  std::optional<uint64_t> seed;
  std::optional<double> rate, max_failure_fraction;
  std::optional<size_t> toxic_n, nontoxic_n, n, mr_k;
  std::string pinyin_case = "lower";
  int shuffle_window = 2;
  int threshold = 3;
  bool serial = false;
};

class Context {
 public:
  Context(const GlobalOptions& g, std::ostream& out, std::ostream& err)
      : global_(g), out_(out), err_(err) {
    if (!g.config.empty()) file_ = LoadConfig(g.config);
  }

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  const FileConfig& file() const { return file_; }

  // Flag value, else config value, else `fallback`.
  std::string Path(const std::string& flag, const std::string& key,
                   const std::string& fallback) const {
    if (!flag.empty()) return flag;
    return file_.Get(key).value_or(fallback);
  }

  uint64_t Seed(const std::optional<uint64_t>& flag) const {
    if (flag) return *flag;
    if (auto v = file_.Get("seed")) return ParseU64(*v, "seed");
    return 0;
  }

  double Number(const std::optional<double>& flag, const std::string& key,
                double fallback) const {
    if (flag) return *flag;
    if (auto v = file_.Get(key)) {
      try {
        return std::stod(*v);
      } catch (const std::exception&) {
        throw ValidationError("config " + key + " is not a number");
      }
    }
    return fallback;
  }

  std::optional<size_t> Count(const std::optional<size_t>& flag,
                              const std::string& key) const {
    if (flag) return flag;
    if (auto v = file_.Get(key)) return ParseU64(*v, key);
    return std::nullopt;
  }

  // Endpoint from the config file; with --mock, unknown names are allowed.
  EndpointConfig Endpoint(const std::string& name) const {
    auto it = file_.endpoints.find(name);
    if (it != file_.endpoints.end()) return it->second;
    if (!global_.mock.empty()) {
      EndpointConfig e;
      e.name = name;
      e.model_id = name;
      return e;
    }
    throw ValidationError("no endpoint '" + name +
                          "' in the configuration (use --config or --mock)");
  }

  ChatBackend& Backend() {
    if (!backend_) {
      if (global_.mock.empty()) {
        backend_ = std::make_unique<HttpChatBackend>();
      } else {
        backend_ = std::make_unique<ScriptedBackend>(
            ScriptedBackend::FromFile(global_.mock));
      }
    }
    return *backend_;
  }

  std::optional<fs::path> CacheDir(const fs::path& out_dir) const {
    const std::string dir = Path(global_.cache_dir, "cache_dir", "");
    if (!dir.empty()) return fs::path(dir);
    return out_dir / ".cache";
  }

  bool mock() const { return !global_.mock.empty(); }
  std::string MockChecksum() const {
    return mock() ? Sha256File(global_.mock) : "";
  }

  static uint64_t ParseU64(const std::string& v, const std::string& what) {
    try {
      size_t used = 0;
      const unsigned long long x = std::stoull(v, &used);
      if (used == v.size() && v.find('-') == std::string::npos) return x;
    } catch (const std::exception&) {
    }
    throw ValidationError(what + " must be a non-negative integer");
  }

 private:
  GlobalOptions global_;
  std::ostream& out_;
  std::ostream& err_;
  FileConfig file_;
  std::unique_ptr<ChatBackend> backend_;
};

std::vector<PerturbationType> ParseTypes(const std::vector<std::string>& flags) {
  if (flags.empty() ||
      std::find(flags.begin(), flags.end(), "all") != flags.end()) {
    return {kAllPerturbationTypes.begin(), kAllPerturbationTypes.end()};
  }
  std::vector<PerturbationType> out;
  for (const std::string& f : flags) {
    const auto t = ParseType(f);
    if (!t) {
      throw ValidationError("unknown perturbation type '" + f +
                            "' (expected one of vsim, split, trad, py_init, "
                            "py_full, homo, shuff, emoji, all)");
    }
    if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
  }
  return out;
}

PinyinCase ParseCase(const std::string& s) {
  if (s == "lower") return PinyinCase::kLower;
  if (s == "upper") return PinyinCase::kUpper;
  throw ValidationError("--pinyin-case must be lower or upper");
}

void CheckRate(double rate) {
  if (!(rate > 0 && rate <= 1)) throw ValidationError("--rate must be in (0, 1]");
}

std::string Sanitize(std::string s) {
  for (char& c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.' || c == '+';
    if (!ok) c = '_';
  }
  return s;
}

std::string FileShaOrEmpty(const std::string& p) {
  return p.empty() ? "" : Sha256File(p);
}

// ---- kb validate ----

int KbValidate(Context& ctx, const Options& o) {
  const std::string tables = ctx.Path(o.tables, "tables", "data/tables");
  try {
    const auto kb = CharacterKnowledgeBase::LoadDirectory(tables);
    size_t splits = 0, trad = 0;
    for (const auto& [ch, e] : kb.entries()) {
      splits += !e.decomposition.empty();
      trad += e.is_simplified;
    }
    ctx.out() << "tables: " << tables << "\n"
              << "characters: " << kb.size() << "\n"
              << "with splits: " << splits << "\n"
              << "with traditional forms: " << trad << "\n"
              << "visual rows: " << kb.visual_rows() << "\n"
              << "emoji rows: " << kb.emoji_rows() << "\n"
              << "homophone syllables: " << kb.homophone_index().size() << "\n"
              << "sha256: " << TablesChecksum(tables) << "\n";
    return kExitOk;
  } catch (const KbLoadError& e) {
    for (const Violation& v : e.violations()) ctx.err() << v.ToString() << "\n";
    ctx.err() << e.violations().size() << " violation(s)\n";
    return kExitValidation;
  }
}

// ---- perturb ----

int Perturb(Context& ctx, const Options& o) {
  if (o.in.empty() || o.out.empty()) {
    throw ValidationError("perturb needs --in and --out");
  }
  const std::string tables = ctx.Path(o.tables, "tables", "data/tables");
  const double rate = ctx.Number(o.rate, "rate", 0.3);
  CheckRate(rate);
  const uint64_t seed = ctx.Seed(o.seed);
  const auto types = ParseTypes(o.types);
  const auto kb = CharacterKnowledgeBase::LoadDirectory(tables);

  std::vector<BatchInput> inputs;
  size_t passthrough = 0;
  std::map<std::string, std::vector<ToxicSpan>> spans;
  std::string span_source;
  if (!o.spans.empty()) {
    for (const SpanRecord& s : ReadJsonl(o.spans, &SpanRecordFromJson)) {
      spans[s.id] = s.spans;
    }
    span_source = "spans:" + Sha256File(o.spans);
  }
  std::optional<ToxicLexicon> lexicon;
  const std::string lexicon_path =
      ctx.Path(o.lexicon, "lexicon", "data/lexicon/toxic_terms.txt");
  if (o.spans.empty()) {
    lexicon = ToxicLexicon::Load(lexicon_path);
    span_source = "lexicon:" + Sha256File(lexicon_path);
  }
  size_t index = 0;
  for (const OrderedJson& j : ReadJsonlRaw(o.in)) {
    ++index;
    CorpusRecord c;
    try {
      c = CorpusRecordFromJson(j);
    } catch (const ValidationError& e) {
      throw ValidationError(fs::path(o.in).filename().string() + " record " +
                            std::to_string(index) + ": " + e.what());
    }
    if (c.label != Label::kToxic || (j.contains("type") && !j["type"].is_null())) {
      ++passthrough;
      continue;
    }
    BatchInput in{c.id, c.text, c.label, {}};
    if (lexicon) {
      in.spans = ExtractWithLexicon(*lexicon, {c.id, c.text}).spans;
    } else if (auto it = spans.find(c.id); it != spans.end()) {
      in.spans = it->second;
    }
    inputs.push_back(std::move(in));
  }
  PerturbConfig pc;
  pc.max_rate = rate;
  pc.seed = seed;
  pc.pinyin_case = ParseCase(o.pinyin_case);
  pc.shuffle_window = o.shuffle_window;
  const BatchResult batch = o.serial ? BatchPerturbSerial(kb, inputs, types, pc)
                                     : BatchPerturb(kb, inputs, types, pc);
  std::vector<OrderedJson> rows;
  double ratio_sum = 0;
  for (const BatchRecord& b : batch.records) {
    DatasetRecord r;
    r.id = b.id;
    r.text = b.sample.perturbed;
    r.label = b.sample.label;
    r.type = b.sample.type;
    r.original_id = b.original_id;
    r.edits = ToRecordEdits(forge::utf8::Decode(b.sample.original), b.sample.edits);
    r.ratio = b.sample.ratio;
    r.seed = b.sample.seed;
    ratio_sum += r.ratio;
    rows.push_back(ToJson(r));
  }
  WriteJsonl(o.out, rows);
  OrderedJson skips = OrderedJson::array();
  std::map<std::string, size_t> reasons;
  for (const BatchSkip& s : batch.skips) {
    skips.push_back({{"original_id", s.original_id},
                     {"type", TypeFlag(s.type)},
                     {"reason", s.reason},
                     {"message", s.message}});
    ++reasons[s.reason];
  }
  OrderedJson type_flags = OrderedJson::array();
  for (PerturbationType t : types) type_flags.push_back(TypeFlag(t));
  const double mean = rows.empty() ? 0.0 : ratio_sum / rows.size();
  const OrderedJson manifest = {
      {"kind", "perturb"},
      {"seed", seed},
      {"config",
       {{"rate", rate},
        {"types", type_flags},
        {"pinyin_case", o.pinyin_case},
        {"shuffle_window", o.shuffle_window}}},
      {"inputs",
       {{"in", o.in},
        {"in_sha256", Sha256File(o.in)},
        {"tables", tables},
        {"kb_sha256", TablesChecksum(tables)},
        {"spans", span_source}}},
      {"counts",
       {{"inputs", inputs.size()},
        {"passed_through", passthrough},
        {"records", rows.size()},
        {"skipped", batch.skips.size()}}},
      {"mean_ratio", mean},
      {"corpus_mean_ratio_within_cap", mean <= rate},
      {"skip_reasons", reasons},
      {"skips", skips},
      {"out_sha256", Sha256File(o.out)}};
  fs::path manifest_path = o.out;
  manifest_path += ".manifest.json";
  WriteFileAtomic(manifest_path, manifest.dump(2) + "\n");
  ctx.out() << rows.size() << " records, " << batch.skips.size()
            << " skipped, mean ratio " << mean << "\n";
  return kExitOk;
}

// ---- dataset ----

SpanExtractor ModelExtractor(Context& ctx, const std::string& model,
                             const std::string& prompts_dir,
                             const fs::path& out_dir,
                             std::shared_ptr<ChatClient>& client,
                             std::shared_ptr<PromptCatalog>& catalog) {
  const EndpointConfig endpoint = ctx.Endpoint(model);
  catalog = std::make_shared<PromptCatalog>(PromptCatalog::Load(prompts_dir));
  client = std::make_shared<ChatClient>(ctx.Backend(), ctx.CacheDir(out_dir));
  const PromptTemplate& tmpl = catalog->Get("EXTRACT_FEWSHOT");
  const std::string tag = "model:" + endpoint.name + ":" + endpoint.model_id +
                          ":" + Sha256Hex(tmpl.text) + ":" + ctx.MockChecksum();
  ChatClient* c = client.get();
  const PromptTemplate* t = &tmpl;
  return {tag, [c, t, endpoint](const std::vector<SampleText>& in) {
            std::vector<ExtractionResult> out(in.size());
            ParallelFor(in.size(), endpoint.max_concurrent, [&](size_t i) {
              out[i] = ExtractWithModel(*c, endpoint, *t, in[i]);
            });
            return out;
          }};
}

int DatasetBuild(Context& ctx, const Options& o) {
  DatasetConfig c;
  c.corpus = ctx.Path(o.corpus, "corpus", "");
  if (c.corpus.empty()) throw ValidationError("dataset build needs --corpus");
  if (o.out.empty()) throw ValidationError("dataset build needs --out");
  c.tables = ctx.Path(o.tables, "tables", "data/tables");
  c.out = o.out;
  c.seed = ctx.Seed(o.seed);
  c.rate = ctx.Number(o.rate, "rate", 0.3);
  CheckRate(c.rate);
  c.toxic_n = ctx.Count(o.toxic_n, "toxic_n");
  c.nontoxic_n = ctx.Count(o.nontoxic_n, "nontoxic_n");
  c.types = ParseTypes(o.types);
  c.pinyin_case = ParseCase(o.pinyin_case);
  c.shuffle_window = o.shuffle_window;
  c.readability_threshold = o.threshold;
  if (!o.annotations.empty()) c.annotations = fs::path(o.annotations);
  const auto kb = CharacterKnowledgeBase::LoadDirectory(c.tables);

  std::optional<ToxicLexicon> lexicon;
  std::shared_ptr<ChatClient> client;
  std::shared_ptr<PromptCatalog> catalog;
  SpanExtractor extractor;
  if (!o.extract_model.empty()) {
    extractor = ModelExtractor(ctx, o.extract_model,
                               ctx.Path(o.prompts, "prompts", "data/prompts"),
                               c.out, client, catalog);
  } else {
    const std::string path =
        ctx.Path(o.lexicon, "lexicon", "data/lexicon/toxic_terms.txt");
    lexicon = ToxicLexicon::Load(path);
    extractor = LexiconExtractor(*lexicon, Sha256File(path));
  }
  const BuildSummary report = BuildDataset(c, kb, extractor);
  for (const auto& s : report.ran) ctx.out() << "ran " << s << "\n";
  for (const auto& s : report.skipped) ctx.out() << "up to date " << s << "\n";
  const auto& totals = report.manifest["totals"];
  ctx.out() << "status: " << report.manifest["status"].get<std::string>()
            << "\nperturbed: " << totals["perturbed"]
            << ", kept: " << totals["kept"]
            << ", discarded: " << totals["discarded"]
            << ", pending: " << totals["pending"]
            << ", mean ratio: " << totals["mean_ratio"] << "\n";
  return kExitOk;
}

int AnnotateExport(Context& ctx, const Options& o) {
  if (o.data.empty() || o.out.empty()) {
    throw ValidationError("annotate-export needs --data and --out");
  }
  ExportAnnotations(o.data, o.out);
  ctx.out() << "worksheet written to " << o.out << "\n";
  return kExitOk;
}

int AnnotateImport(Context& ctx, const Options& o) {
  if (o.data.empty() || o.in.empty()) {
    throw ValidationError("annotate-import needs --data and --in");
  }
  const OrderedJson m = ImportAnnotations(o.data, o.in);
  ctx.out() << "status: " << m["status"].get<std::string>()
            << ", kept: " << m["totals"]["kept"]
            << ", discarded: " << m["discard_count"]
            << ", pending: " << m["pending_count"] << "\n";
  return kExitOk;
}

// ---- eval ----

int Eval(Context& ctx, const Options& o) {
  if (o.model.empty()) throw ValidationError("eval needs --model");
  if (o.data.empty() || o.out.empty()) {
    throw ValidationError("eval needs --data and --out");
  }
  const std::string template_id = o.template_id.empty()
                                      ? ctx.file().Get("template").value_or("CN")
                                      : o.template_id;
  const std::string prompts = ctx.Path(o.prompts, "prompts", "data/prompts");
  const PromptCatalog catalog = PromptCatalog::Load(prompts);
  const PromptTemplate& tmpl = catalog.Get(template_id);
  std::vector<IclExample> icl;
  if (!o.icl.empty()) {
    icl = LoadIclExamples(o.icl);
    ValidateIclBlock(icl);
  }
  const EndpointConfig endpoint = ctx.Endpoint(o.model);
  const auto samples = LoadEvalSamples(o.data);
  const uint64_t seed = ctx.Seed(o.seed);
  ChatClient client(ctx.Backend(), ctx.CacheDir(o.out), seed);
  EvalOptions options;
  options.icl = icl.empty() ? nullptr : &icl;
  options.max_failure_fraction =
      ctx.Number(o.max_failure_fraction, "max_failure_fraction", 0.10);
  EvalOutcome outcome = RunEval(client, endpoint, tmpl, samples, options);
  const std::string cell_template = tmpl.id + (icl.empty() ? "" : "+ICL");
  for (ResultRecord& r : outcome.records) r.template_id = cell_template;

  const std::string stem = Sanitize(endpoint.name) + "__" + Sanitize(cell_template);
  const fs::path results = fs::path(o.out) / (stem + ".jsonl");
  WriteJsonl(results, ToJsonRows(outcome.records));
  size_t unparseable = 0;
  for (const auto& r : outcome.records) {
    unparseable += r.label == VerdictLabel::kUnparseable;
  }
  const fs::path manifest_path = fs::path(o.out) / kManifestFile;
  OrderedJson manifest = fs::exists(manifest_path)
                             ? OrderedJson::parse(ReadFile(manifest_path))
                             : OrderedJson{{"kind", "eval"},
                                           {"runs", OrderedJson::object()}};
  const fs::path data_manifest = fs::path(o.data) / kManifestFile;
  manifest["runs"][results.filename().string()] = {
      {"model", endpoint.name},
      {"model_id", endpoint.model_id},
      {"base_url", endpoint.base_url},
      {"backend", ctx.mock() ? "mock" : "http"},
      {"mock_sha256", ctx.MockChecksum()},
      {"template", tmpl.id},
      {"template_sha256", Sha256Hex(tmpl.text)},
      {"icl", o.icl},
      {"icl_sha256", FileShaOrEmpty(o.icl)},
      {"data", o.data},
      {"dataset_sha256", Sha256File(fs::path(o.data) / kDatasetFile)},
      {"data_manifest_sha256",
       fs::exists(data_manifest) ? Sha256File(data_manifest) : ""},
      {"seed", seed},
      {"temperature", options.gen.temperature},
      {"top_p", options.gen.top_p},
      {"samples", samples.size()},
      {"failures", outcome.failures},
      {"unparseable", unparseable},
      {"results_sha256", Sha256File(results)}};
  WriteFileAtomic(manifest_path, manifest.dump(2) + "\n");
  ctx.out() << results.string() << ": " << samples.size() << " samples, "
            << outcome.failures << " failed, " << unparseable
            << " unparseable\n";
  ctx.err() << "cache hits: " << client.cache_hits()
            << ", backend calls: " << client.backend_calls() << "\n";
  return kExitOk;
}

// ---- export-ft ----

int ExportFt(Context& ctx, const Options& o) {
  if (o.data.empty() || o.out.empty()) {
    throw ValidationError("export-ft needs --data and --out");
  }
  if (!o.n) throw ValidationError("export-ft needs --n");
  const uint64_t seed = ctx.Seed(o.seed);
  const PromptCatalog catalog =
      PromptCatalog::Load(ctx.Path(o.prompts, "prompts", "data/prompts"));
  const PromptTemplate& tmpl =
      catalog.Get(o.template_id.empty() ? "CN" : o.template_id);
  const auto samples =
      SelectFinetuneSamples(FinetuneCandidates(o.data), *o.n, seed);
  ExportFinetune(samples, tmpl, o.out, seed);
  ctx.out() << samples.size() << " records written to " << o.out
            << "; hyperparameters in " << SidecarPath(o.out).string() << "\n";
  return kExitOk;
}

// ---- report ----

int Report(Context& ctx, const Options& o) {
  if (o.in.empty()) throw ValidationError("report needs --in");
  const fs::path out_dir = o.out.empty() ? fs::path(o.in) : fs::path(o.out);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.in)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ResultRecord> records;
  OrderedJson inputs = OrderedJson::object();
  for (const fs::path& f : files) {
    auto part = ReadJsonl(f, &ResultRecordFromJson);
    records.insert(records.end(), part.begin(), part.end());
    inputs[f.filename().string()] = Sha256File(f);
  }
  ReportOptions options;
  options.mr_k = ctx.Count(o.mr_k, "mr_k").value_or(30);
  options.seed = ctx.Seed(o.seed);
  if (!o.overrides.empty()) {
    options.mr_overrides = LoadMrOverrides(o.overrides);
    options.mr_override_source = fs::path(o.overrides).filename().string();
  }
  const auto rows = BuildReport(records, options);
  fs::create_directories(out_dir);
  WriteFileAtomic(out_dir / "report.tsv", RenderTsv(rows));
  const std::string text = RenderText(rows, options);
  WriteFileAtomic(out_dir / "report.txt", text);
  const OrderedJson manifest = {
      {"kind", "report"},
      {"seed", options.seed},
      {"mr_k", options.mr_k},
      {"mr_mode", options.mr_overrides.empty() ? "auto" : "override"},
      {"mr_overrides", o.overrides},
      {"mr_overrides_sha256", FileShaOrEmpty(o.overrides)},
      {"inputs", inputs},
      {"rows", rows.size()},
      {"records", records.size()}};
  const fs::path manifest_path = out_dir == fs::path(o.in)
                                     ? out_dir / "report.manifest.json"
                                     : out_dir / kManifestFile;
  WriteFileAtomic(manifest_path, manifest.dump(2) + "\n");
  ctx.out() << text;
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Chinese toxic-text perturbation and LLM detection benchmark",
               "forge"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "INI configuration file");
  app.add_option("--mock", g.mock,
                 "Route model calls to a scripted JSONL backend");
  app.add_option("--cache-dir", g.cache_dir, "Response cache directory");

  Options o;
  std::function<int(Context&, const Options&)> action;
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Seed for every random choice");
  };

  CLI::App* kb = app.add_subcommand("kb", "Knowledge-base tools");
  kb->require_subcommand(1);
  CLI::App* kb_validate = kb->add_subcommand("validate", "Validate tables");
  kb_validate->add_option("--tables", o.tables, "Table directory");
  kb_validate->callback([&] { action = KbValidate; });

  CLI::App* perturb = app.add_subcommand("perturb", "Perturb records");
  perturb->add_option("--type", o.types, "Type flag(s) or 'all'");
  perturb->add_option("--rate", o.rate, "Per-sentence perturbation cap");
  add_seed(perturb);
  perturb->add_option("--in", o.in, "Input records (JSONL)");
  perturb->add_option("--out", o.out, "Output records (JSONL)");
  perturb->add_option("--tables", o.tables, "Table directory");
  perturb->add_option("--spans", o.spans, "Span records (JSONL)");
  perturb->add_option("--lexicon", o.lexicon, "Toxic term list");
  perturb->add_option("--pinyin-case", o.pinyin_case, "lower or upper");
  perturb->add_option("--shuffle-window", o.shuffle_window, "Swap distance");
  perturb->add_flag("--serial", o.serial, "Use the single-threaded path");
  perturb->callback([&] { action = Perturb; });

  CLI::App* dataset = app.add_subcommand("dataset", "Dataset pipeline");
  dataset->require_subcommand(1);
  CLI::App* build = dataset->add_subcommand("build", "Run the pipeline");
  build->add_option("--corpus", o.corpus, "Corpus records (JSONL)");
  build->add_option("--tables", o.tables, "Table directory");
  build->add_option("--out", o.out, "Output directory");
  add_seed(build);
  build->add_option("--toxic-n", o.toxic_n, "Toxic base sample size");
  build->add_option("--nontoxic-n", o.nontoxic_n, "Non-toxic base sample size");
  build->add_option("--rate", o.rate, "Per-sentence perturbation cap");
  build->add_option("--type", o.types, "Type flag(s) or 'all'");
  build->add_option("--lexicon", o.lexicon, "Toxic term list");
  build->add_option("--extract-model", o.extract_model,
                    "Extract spans with this endpoint instead of the lexicon");
  build->add_option("--prompts", o.prompts, "Prompt catalog directory");
  build->add_option("--annotations", o.annotations,
                    "Filled annotation worksheet to import");
  build->add_option("--pinyin-case", o.pinyin_case, "lower or upper");
  build->add_option("--shuffle-window", o.shuffle_window, "Swap distance");
  build->add_option("--threshold", o.threshold, "Readability threshold");
  build->callback([&] { action = DatasetBuild; });
  CLI::App* exp = dataset->add_subcommand("annotate-export",
                                          "Write the annotation worksheet");
  exp->add_option("--data", o.data, "Dataset directory");
  exp->add_option("--out", o.out, "Worksheet file");
  exp->callback([&] { action = AnnotateExport; });
  CLI::App* imp = dataset->add_subcommand("annotate-import",
                                          "Import a filled worksheet");
  imp->add_option("--data", o.data, "Dataset directory");
  imp->add_option("--in", o.in, "Worksheet file");
  imp->callback([&] { action = AnnotateImport; });

  CLI::App* eval = app.add_subcommand("eval", "Query a model on a dataset");
  eval->add_option("--model", o.model, "Endpoint name");
  eval->add_option("--template", o.template_id, "Prompt template id");
  eval->add_option("--icl", o.icl, "In-context examples (JSONL)");
  eval->add_option("--data", o.data, "Dataset directory");
  eval->add_option("--out", o.out, "Results directory");
  eval->add_option("--prompts", o.prompts, "Prompt catalog directory");
  eval->add_option("--max-failure-fraction", o.max_failure_fraction,
                   "Abort when more requests than this fail");
  add_seed(eval);
  eval->callback([&] { action = Eval; });

  CLI::App* ft = app.add_subcommand("export-ft", "Write a fine-tuning file");
  ft->add_option("--n", o.n, "Number of samples (10, 20 or 40)");
  ft->add_option("--data", o.data, "Dataset directory");
  ft->add_option("--out", o.out, "Training file (JSONL)");
  ft->add_option("--template", o.template_id, "Prompt template id");
  ft->add_option("--prompts", o.prompts, "Prompt catalog directory");
  add_seed(ft);
  ft->callback([&] { action = ExportFt; });

  CLI::App* report = app.add_subcommand("report", "Render result tables");
  report->add_option("--in", o.in, "Results directory");
  report->add_option("--out", o.out, "Report directory (default: --in)");
  report->add_option("--mr-k", o.mr_k, "MR sample size per cell");
  report->add_option("--mr-overrides", o.overrides, "Human MR judgments");
  add_seed(report);
  report->callback([&] { action = Report; });

  for (CLI::App* sub : {kb, perturb, dataset, eval, ft, report}) {
    sub->fallthrough();
  }
  for (CLI::App* sub : {kb_validate, build, exp, imp}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  try {
    Context ctx(g, out, err);
    return action(ctx, o);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace forge
