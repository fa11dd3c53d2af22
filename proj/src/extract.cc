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

#include "forge/extract.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "forge/hash.h"
#include "forge/utf8.h"

namespace forge {

std::string_view ExtractionSourceName(ExtractionSource s) {
  switch (s) {
    case ExtractionSource::kModel:
      return "model";
    case ExtractionSource::kLexicon:
      return "lexicon";
    case ExtractionSource::kGold:
      return "gold";
  }
  return "unknown";
}

ToxicLexicon ToxicLexicon::Load(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::pair<std::string, std::string>> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      terms.emplace_back(line, "");
    } else {
      terms.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
  }
  return FromTerms(terms);
}

ToxicLexicon ToxicLexicon::FromTerms(
    const std::vector<std::pair<std::string, std::string>>& terms) {
  ToxicLexicon lex;
  for (const auto& [term, category] : terms) {
    std::u32string t = utf8::Decode(term);
    if (t.empty()) throw ValidationError("lexicon contains an empty term");
    lex.max_len_ = std::max(lex.max_len_, t.size());
    lex.terms_.emplace(std::move(t), category);
  }
  return lex;
}

const std::string* ToxicLexicon::CategoryOf(const std::u32string& term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? nullptr : &it->second;
}

std::vector<ToxicSpan> ToxicLexicon::Match(std::u32string_view text) const {
  std::vector<ToxicSpan> out;
  size_t i = 0;
  while (i < text.size()) {
    size_t matched = 0;
    for (size_t len = std::min(max_len_, text.size() - i); len > 0; --len) {
      if (terms_.count(std::u32string(text.substr(i, len)))) {
        matched = len;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    out.push_back({i, i + matched, utf8::Encode(text.substr(i, matched))});
    i += matched;
  }
  return out;
}

ExtractionResult ExtractWithLexicon(const ToxicLexicon& lexicon,
                                    const SampleText& sample) {
  if (sample.text.empty()) {
    throw ValidationError("sample '" + sample.id + "' has empty text");
  }
  ExtractionResult r;
  r.id = sample.id;
  r.text = sample.text;
  r.source = ExtractionSource::kLexicon;
  r.spans = lexicon.Match(utf8::Decode(sample.text));
  return r;
}

std::vector<ExtractionResult> ExtractBatchSerial(
    const ToxicLexicon& lexicon, const std::vector<SampleText>& in) {
  std::vector<ExtractionResult> out;
  out.reserve(in.size());
  for (const SampleText& s : in) out.push_back(ExtractWithLexicon(lexicon, s));
  return out;
}

std::vector<ExtractionResult> ExtractBatch(const ToxicLexicon& lexicon,
                                           const std::vector<SampleText>& in) {
  std::vector<ExtractionResult> out(in.size());
  std::vector<std::string> errors(in.size());
  const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = ExtractWithLexicon(lexicon, in[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw ValidationError(e);
  }
  return out;
}

std::vector<std::string> ParseExtractionReply(std::string_view reply) {
  std::u32string text;
  try {
    text = utf8::Decode(reply);
  } catch (const ValidationError&) {
    return {};
  }
  std::vector<std::u32string> pieces(1);
  for (char32_t c : text) {
    // "2、" is list numbering, not a separator.
    const bool numbering =
        c == U'、' && !pieces.back().empty() &&
        std::all_of(pieces.back().begin(), pieces.back().end(), [](char32_t d) {
          return (d >= U'0' && d <= U'9') || d == U' ';
        });
    if (!numbering && (c == U'\n' || c == U',' || c == U'，' || c == U'、' ||
                       c == U';' || c == U'；')) {
      pieces.emplace_back();
    } else {
      pieces.back().push_back(c);
    }
  }
  auto strip = [](char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\r' || c == 0x3000 ||
           c == U'"' || c == U'\'' || c == U'“' || c == U'”' || c == U'「' ||
           c == U'」' || c == U'-' || c == U'*' || c == U'•' || c == U'。' ||
           c == U'.';
  };
  std::vector<std::string> out;
  for (std::u32string p : pieces) {
    // Leading list numbering such as "1." or "2、".
    size_t a = 0;
    while (a < p.size() && strip(p[a])) ++a;
    size_t digits = a;
    while (digits < p.size() && p[digits] >= U'0' && p[digits] <= U'9') {
      ++digits;
    }
    if (digits > a && digits < p.size() &&
        (p[digits] == U'.' || p[digits] == U'、' || p[digits] == U')' ||
         p[digits] == U'）')) {
      a = digits + 1;
      while (a < p.size() && strip(p[a])) ++a;
    }
    size_t b = p.size();
    while (b > a && strip(p[b - 1])) --b;
    p = p.substr(a, b - a);
    // "输出：" or "Output:" headings.
    for (std::u32string_view head : {U"输出：", U"输出:", U"Output:"}) {
      if (p.rfind(head, 0) == 0) p = p.substr(head.size());
    }
    if (p.empty() || p == U"无" || p == U"没有" || p == U"none" ||
        p == U"None") {
      continue;
    }
    out.push_back(utf8::Encode(p));
  }
  return out;
}

ExtractionResult AlignSurfaces(const SampleText& sample,
                               const std::vector<std::string>& surfaces,
                               ExtractionSource source) {
  ExtractionResult r;
  r.id = sample.id;
  r.text = sample.text;
  r.source = source;
  const std::u32string text = utf8::Decode(sample.text);
  std::vector<bool> taken(text.size(), false);
  for (const std::string& surface : surfaces) {
    const std::u32string s = utf8::Decode(surface);
    const size_t pos = s.empty() ? std::u32string::npos : text.find(s);
    if (pos == std::u32string::npos) {
      r.warnings.push_back("'" + surface + "' does not occur verbatim in '" +
                           sample.id + "'");
      continue;
    }
    if (std::any_of(taken.begin() + pos, taken.begin() + pos + s.size(),
                    [](bool b) { return b; })) {
      r.warnings.push_back("'" + surface + "' overlaps an earlier span in '" +
                           sample.id + "'");
      continue;
    }
    std::fill(taken.begin() + pos, taken.begin() + pos + s.size(), true);
    r.spans.push_back({pos, pos + s.size(), surface});
  }
  std::sort(r.spans.begin(), r.spans.end(),
            [](const ToxicSpan& a, const ToxicSpan& b) {
              return a.start < b.start;
            });
  for (const std::string& w : r.warnings) spdlog::warn("extract: {}", w);
  return r;
}

ExtractionResult ExtractWithModel(ChatClient& client,
                                  const EndpointConfig& endpoint,
                                  const PromptTemplate& tmpl,
                                  const SampleText& sample,
                                  const GenConfig& gen) {
  if (sample.text.empty()) {
    throw ValidationError("sample '" + sample.id + "' has empty text");
  }
  const auto messages = RenderPrompt(tmpl, sample.text);
  const std::string reply =
      client.Query(endpoint, messages, gen, {sample.id + "#extract"});
  return AlignSurfaces(sample, ParseExtractionReply(reply),
                       ExtractionSource::kModel);
}

AccuracyCount ExtractionAccuracy(const std::vector<ExtractionResult>& results,
                                 const std::vector<ExtractionResult>& gold) {
  using SpanSet = std::set<std::pair<size_t, size_t>>;
  std::map<std::string, SpanSet> gold_sets;
  for (const ExtractionResult& g : gold) {
    SpanSet s;
    for (const ToxicSpan& span : g.spans) s.emplace(span.start, span.end);
    if (!gold_sets.emplace(g.id, std::move(s)).second) {
      throw ValidationError("duplicate gold id '" + g.id + "'");
    }
  }
  if (results.size() != gold_sets.size()) {
    throw ValidationError("results cover " + std::to_string(results.size()) +
                          " samples but gold covers " +
                          std::to_string(gold_sets.size()));
  }
  AccuracyCount acc;
  std::set<std::string> seen;
  for (const ExtractionResult& r : results) {
    auto it = gold_sets.find(r.id);
    if (it == gold_sets.end() || !seen.insert(r.id).second) {
      throw ValidationError("result id '" + r.id + "' does not match gold");
    }
    SpanSet s;
    for (const ToxicSpan& span : r.spans) s.emplace(span.start, span.end);
    ++acc.total;
    if (s == it->second) ++acc.correct;
  }
  return acc;
}

}  // namespace forge
