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

#include "forge/metrics.h"

#include <algorithm>
#include <sstream>

#include "forge/hash.h"
#include "forge/rng.h"
#include "forge/utf8.h"

namespace forge {
namespace {

Rational Percent(int64_t flagged, int64_t n) { return Rational(100 * flagged, n); }

int64_t Flagged(const std::vector<VerdictLabel>& v) {
  return std::count(v.begin(), v.end(), VerdictLabel::kToxic);
}

// Punctuation and whitespace removed, fullwidth ASCII folded, ASCII
// lowercased.
std::u32string Normalize(std::string_view s) {
  std::u32string in;
  try {
    in = utf8::Decode(s);
  } catch (const ValidationError&) {
    return {};
  }
  std::u32string out;
  for (char32_t c : in) {
    if (c >= 0xFF01 && c <= 0xFF5E) c -= 0xFEE0;
    if (utf8::IsPunctOrSpace(c) || c == U'“' || c == U'”' || c == U'‘' ||
        c == U'’' || c == U'「' || c == U'」') {
      continue;
    }
    if (c >= U'A' && c <= U'Z') c += 32;
    out.push_back(c);
  }
  return out;
}

void ReplaceAll(std::u32string& s, const std::u32string& from,
                const std::u32string& to) {
  if (from.empty()) return;
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::u32string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ConfusionCounts Confusion(const std::vector<ScoredSample>& samples) {
  ConfusionCounts c;
  for (const ScoredSample& s : samples) {
    const bool flagged = s.predicted == VerdictLabel::kToxic;
    if (s.gold == Label::kToxic) {
      flagged ? ++c.tp : ++c.fn;
    } else {
      flagged ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

Rational DetectionRate(const std::vector<VerdictLabel>& toxic_slice) {
  if (toxic_slice.empty()) {
    throw ValidationError("detection rate of an empty slice");
  }
  return Percent(Flagged(toxic_slice), static_cast<int64_t>(toxic_slice.size()));
}

Rational ErrorRate(const std::vector<VerdictLabel>& non_toxic_slice) {
  if (non_toxic_slice.empty()) {
    throw ValidationError("error rate of an empty slice");
  }
  return Percent(Flagged(non_toxic_slice),
                 static_cast<int64_t>(non_toxic_slice.size()));
}

Rational F1(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0) {
    throw ValidationError("F1 needs both toxic and non-toxic gold samples");
  }
  const int64_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return Rational(0);
  return Rational(2 * c.tp, denom);
}

std::string FormatRational(const Rational& r, int decimals) {
  int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational a = negative ? -r : r;
  // floor(a * scale + 1/2)
  const Rational scaled = a * scale + Rational(1, 2);
  const int64_t units = scaled.numerator() / scaled.denominator();
  std::ostringstream out;
  if (negative && units != 0) out << '-';
  out << units / scale;
  if (decimals > 0) {
    std::string frac = std::to_string(units % scale);
    out << '.' << std::string(decimals - frac.size(), '0') << frac;
  }
  return out.str();
}

bool AutoUnderstood(const MrItem& item) {
  if (!item.extracted) return false;
  std::u32string recovered = Normalize(*item.extracted);
  // Longer perturbed forms first so "米青" is mapped before any substring.
  std::vector<RecordEdit> forms = item.perturbed_forms;
  std::sort(forms.begin(), forms.end(),
            [](const RecordEdit& a, const RecordEdit& b) {
              return a.replacement.size() > b.replacement.size();
            });
  for (const RecordEdit& f : forms) {
    ReplaceAll(recovered, Normalize(f.replacement), Normalize(f.source));
  }
  const std::u32string gold = Normalize(item.gold_entity);
  return !gold.empty() && recovered.find(gold) != std::u32string::npos;
}

MrResult MisinterpretationRate(const std::vector<MrItem>& correct_detections,
                               size_t k, uint64_t seed,
                               const std::map<std::string, bool>& overrides) {
  std::vector<const MrItem*> pool;
  for (const MrItem& item : correct_detections) pool.push_back(&item);
  std::sort(pool.begin(), pool.end(), [](const MrItem* a, const MrItem* b) {
    return a->sample_id < b->sample_id;
  });
  SplitMix64 rng(seed);
  rng.Shuffle(pool);
  pool.resize(std::min(k, pool.size()));
  std::sort(pool.begin(), pool.end(), [](const MrItem* a, const MrItem* b) {
    return a->sample_id < b->sample_id;
  });

  MrResult r;
  r.sampled = pool.size();
  for (const MrItem* item : pool) {
    r.sampled_ids.push_back(item->sample_id);
    bool understood;
    if (auto it = overrides.find(item->sample_id); it != overrides.end()) {
      understood = it->second;
      ++r.overridden;
    } else {
      if (item->gold_entity.empty()) {
        throw ValidationError("sample '" + item->sample_id +
                              "' has no gold entity");
      }
      understood = AutoUnderstood(*item);
    }
    if (!understood) ++r.misunderstood;
  }
  r.rate = r.sampled == 0 ? Rational(0)
                          : Percent(static_cast<int64_t>(r.misunderstood),
                                    static_cast<int64_t>(r.sampled));
  return r;
}

std::map<std::string, bool> LoadMrOverrides(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError(path.string() + " is empty");
  }
  const auto header = SplitTabs(line);
  const auto col = [&](const std::string& name) -> size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ValidationError(path.filename().string() + " lacks column '" +
                            name + "'");
    }
    return static_cast<size_t>(it - header.begin());
  };
  const size_t id_col = col("sample_id");
  const size_t u_col = col("understood");
  std::map<std::string, bool> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = SplitTabs(line);
    if (cells.size() <= std::max(id_col, u_col)) continue;
    std::string v = cells[u_col];
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v.empty()) continue;
    if (v == "true" || v == "1" || v == "yes") {
      out[cells[id_col]] = true;
    } else if (v == "false" || v == "0" || v == "no") {
      out[cells[id_col]] = false;
    } else {
      throw ValidationError(path.filename().string() + ":" +
                            std::to_string(line_no) +
                            ": understood must be true or false");
    }
  }
  return out;
}

}  // namespace forge
