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

#include "forge/char_kb.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "forge/hash.h"
#include "forge/utf8.h"

namespace forge {
namespace {

std::string CharLabel(char32_t ch) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(ch));
  return "'" + utf8::Encode(ch) + "' (" + buf + ")";
}

std::vector<std::string> SplitOn(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> SplitSpaces(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::optional<int> ParsePositiveInt(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0) {
    return std::nullopt;
  }
  return v;
}

// A TSV row with its 1-based line number; comments and blank lines dropped.
struct Row {
  int line;
  std::vector<std::string> fields;
};

class TableReader {
 public:
  TableReader(const std::filesystem::path& path,
              std::vector<Violation>* violations)
      : file_(path.filename().string()), violations_(violations) {
    std::string text;
    try {
      text = ReadFile(path);
    } catch (const Error& e) {
      Add(0, 0, e.what());
      return;
    }
    int line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      try {
        utf8::Decode(line);
      } catch (const ValidationError& e) {
        Add(line_no, 0, e.what());
        continue;
      }
      rows_.push_back({line_no, SplitOn(line, '\t')});
    }
  }

  const std::vector<Row>& rows() const { return rows_; }
  const std::string& file() const { return file_; }

  void Add(int line, int column, std::string message) {
    violations_->push_back({file_, line, column, std::move(message)});
  }

 private:
  std::string file_;
  std::vector<Violation>* violations_;
  std::vector<Row> rows_;
};

// Decodes a field that must hold exactly one CJK codepoint.
std::optional<char32_t> SingleCjk(const std::string& field) {
  const std::u32string cps = utf8::Decode(field);
  if (cps.size() != 1 || !utf8::IsCjk(cps[0])) return std::nullopt;
  return cps[0];
}

}  // namespace

std::string Violation::ToString() const {
  std::ostringstream out;
  out << file;
  if (line > 0) out << ":" << line;
  if (column > 0) out << ":" << column;
  out << ": " << message;
  return out.str();
}

namespace {

std::string JoinViolations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << violations.size() << " knowledge-base violation"
      << (violations.size() == 1 ? "" : "s");
  for (const Violation& v : violations) out << "\n  " << v.ToString();
  return out.str();
}

}  // namespace

KbLoadError::KbLoadError(std::vector<Violation> violations)
    : ValidationError(JoinViolations(violations)),
      violations_(std::move(violations)) {}

UnknownCharError::UnknownCharError(char32_t ch, std::optional<size_t> offset)
    : Error("character " + CharLabel(ch) +
            (offset ? " at offset " + std::to_string(*offset) : "") +
            " is not in the knowledge base"),
      ch_(ch) {}

TablePaths TablePaths::InDirectory(const std::filesystem::path& dir) {
  return {dir / "chars.tsv", dir / "visual.tsv", dir / "emoji.tsv"};
}

const char* ProvenanceName(EmojiProvenance p) {
  switch (p) {
    case EmojiProvenance::kHomophonic:
      return "homo";
    case EmojiProvenance::kPictographic:
      return "picto";
    case EmojiProvenance::kMixed:
      return "mixed";
  }
  return "?";
}

CharacterKnowledgeBase CharacterKnowledgeBase::LoadDirectory(
    const std::filesystem::path& dir) {
  return Load(TablePaths::InDirectory(dir));
}

CharacterKnowledgeBase CharacterKnowledgeBase::Load(const TablePaths& paths) {
  std::vector<Violation> violations;
  CharacterKnowledgeBase kb;

  // chars.tsv: char, decomposition, pinyin, traditional, rank[, strokes]
  TableReader chars(paths.chars, &violations);
  std::map<char32_t, int> line_of;
  std::map<int, char32_t> rank_owner;
  for (const Row& row : chars.rows()) {
    const auto& f = row.fields;
    if (f.size() != 5 && f.size() != 6) {
      chars.Add(row.line, 0,
                "expected 5 or 6 tab-separated fields, got " +
                    std::to_string(f.size()));
      continue;
    }
    bool ok = true;
    CharEntry e;
    if (auto ch = SingleCjk(f[0])) {
      e.ch = *ch;
    } else {
      chars.Add(row.line, 1, "char must be a single CJK codepoint");
      continue;
    }
    if (auto it = line_of.find(e.ch); it != line_of.end()) {
      chars.Add(row.line, 1,
                "duplicate entry for " + CharLabel(e.ch) + " (first on line " +
                    std::to_string(it->second) + ")");
      continue;
    }
    e.decomposition = utf8::Decode(f[1]);
    if (!e.decomposition.empty()) {
      if (e.decomposition.size() < 2 || e.decomposition.size() > 4) {
        chars.Add(row.line, 2, "decomposition must have 2 to 4 components");
        ok = false;
      }
      for (char32_t c : e.decomposition) {
        if (!utf8::IsCjk(c)) {
          chars.Add(row.line, 2, "component " + CharLabel(c) + " is not CJK");
          ok = false;
        } else if (c == e.ch) {
          chars.Add(row.line, 2, "character decomposes into itself");
          ok = false;
        }
      }
    }
    if (f[2].empty()) {
      chars.Add(row.line, 3, "missing pinyin");
      ok = false;
    } else {
      for (const std::string& tok : SplitOn(f[2], ';')) {
        try {
          e.pinyin.push_back(ParseSyllable(tok));
        } catch (const ValidationError& err) {
          chars.Add(row.line, 3, err.what());
          ok = false;
        }
      }
    }
    if (!f[3].empty()) {
      if (auto t = SingleCjk(f[3])) {
        e.traditional = *t;
        e.is_simplified = *t != e.ch;
      } else {
        chars.Add(row.line, 4, "traditional form must be one CJK codepoint");
        ok = false;
      }
    }
    if (auto rank = ParsePositiveInt(f[4])) {
      e.frequency_rank = *rank;
      if (auto it = rank_owner.find(*rank); it != rank_owner.end()) {
        chars.Add(row.line, 5,
                  "frequency rank " + f[4] + " already used by " +
                      CharLabel(it->second));
        ok = false;
      } else {
        rank_owner[*rank] = e.ch;
      }
    } else {
      chars.Add(row.line, 5, "frequency rank must be a positive integer");
      ok = false;
    }
    if (f.size() == 6 && !f[5].empty()) {
      if (auto strokes = ParsePositiveInt(f[5])) {
        e.stroke_count = *strokes;
      } else {
        chars.Add(row.line, 6, "stroke count must be a positive integer");
        ok = false;
      }
    }
    line_of[e.ch] = row.line;
    if (ok) kb.entries_[e.ch] = std::move(e);
  }
  if (chars.rows().empty() && violations.empty()) {
    chars.Add(0, 0, "no entries");
  }

  // Cross-entry checks: components exist, splits and traditional forms are
  // unique so both reverse mappings are exact.
  std::map<char32_t, char32_t> trad_owner;
  for (const auto& [ch, e] : kb.entries_) {
    const int line = line_of[ch];
    for (char32_t c : e.decomposition) {
      if (!kb.entries_.count(c) && !line_of.count(c)) {
        chars.Add(line, 2,
                  "component " + CharLabel(c) + " of " + CharLabel(ch) +
                      " has no entry");
      }
    }
    if (!e.decomposition.empty()) {
      auto [it, inserted] = kb.reverse_split_index_.emplace(e.decomposition, ch);
      if (!inserted) {
        chars.Add(line, 2,
                  "decomposition of " + CharLabel(ch) + " duplicates that of " +
                      CharLabel(it->second));
      }
    }
    if (e.is_simplified) {
      auto [it, inserted] = trad_owner.emplace(*e.traditional, ch);
      if (!inserted) {
        chars.Add(line, 4,
                  "traditional form " + CharLabel(*e.traditional) +
                      " is shared with " + CharLabel(it->second));
      } else if (kb.entries_.count(*e.traditional)) {
        chars.Add(line, 4,
                  "traditional form " + CharLabel(*e.traditional) +
                      " is itself a separate entry");
      }
    }
  }

  // visual.tsv: char, space-separated neighbors
  TableReader visual(paths.visual, &violations);
  for (const Row& row : visual.rows()) {
    const auto& f = row.fields;
    if (f.size() != 2) {
      visual.Add(row.line, 0, "expected 2 tab-separated fields");
      continue;
    }
    auto ch = SingleCjk(f[0]);
    if (!ch) {
      visual.Add(row.line, 1, "char must be a single CJK codepoint");
      continue;
    }
    if (!line_of.count(*ch)) {
      visual.Add(row.line, 1, CharLabel(*ch) + " has no entry in chars.tsv");
      continue;
    }
    if (kb.visual_index_.count(*ch)) {
      visual.Add(row.line, 1, "duplicate row for " + CharLabel(*ch));
      continue;
    }
    std::vector<char32_t> neighbors;
    bool ok = true;
    for (const std::string& tok : SplitSpaces(f[1])) {
      auto n = SingleCjk(tok);
      if (!n) {
        visual.Add(row.line, 2, "neighbor '" + tok + "' is not one CJK char");
        ok = false;
      } else if (*n == *ch) {
        visual.Add(row.line, 2, CharLabel(*ch) + " lists itself as neighbor");
        ok = false;
      } else if (!line_of.count(*n)) {
        visual.Add(row.line, 2, "neighbor " + CharLabel(*n) + " has no entry");
        ok = false;
      } else if (std::find(neighbors.begin(), neighbors.end(), *n) ==
                 neighbors.end()) {
        neighbors.push_back(*n);
      }
    }
    if (neighbors.empty() && ok) {
      visual.Add(row.line, 2, "no neighbors listed");
      ok = false;
    }
    if (ok) kb.visual_index_[*ch] = std::move(neighbors);
  }

  // emoji.tsv: unit, space-separated emoji, provenance
  TableReader emoji(paths.emoji, &violations);
  for (const Row& row : emoji.rows()) {
    const auto& f = row.fields;
    if (f.size() != 3) {
      emoji.Add(row.line, 0, "expected 3 tab-separated fields");
      continue;
    }
    const std::u32string unit = utf8::Decode(f[0]);
    if (unit.empty() ||
        !std::all_of(unit.begin(), unit.end(), utf8::IsCjk)) {
      emoji.Add(row.line, 1, "unit must be one or more CJK characters");
      continue;
    }
    EmojiProvenance prov;
    if (f[2] == "homo") {
      prov = EmojiProvenance::kHomophonic;
    } else if (f[2] == "picto") {
      prov = EmojiProvenance::kPictographic;
    } else {
      emoji.Add(row.line, 3, "provenance must be 'homo' or 'picto'");
      continue;
    }
    const std::vector<std::string> items = SplitSpaces(f[1]);
    if (items.empty()) {
      emoji.Add(row.line, 2, "no emoji listed");
      continue;
    }
    auto& list = kb.emoji_index_[unit];
    for (const std::string& item : items) list.push_back({item, prov});
  }

  if (!violations.empty()) throw KbLoadError(std::move(violations));

  for (const auto& [ch, e] : kb.entries_) {
    kb.max_rank_ = std::max(kb.max_rank_, e.frequency_rank);
    if (e.is_simplified) kb.trad_to_simp_[*e.traditional] = ch;
    std::set<std::string> seen;
    for (const Syllable& s : e.pinyin) {
      if (seen.insert(s.Toneless()).second) {
        kb.homophone_index_[s.Toneless()].push_back(ch);
      }
    }
    kb.primary_by_syllable_[e.primary().Toneless()].push_back(ch);
  }
  auto by_rank = [&kb](char32_t a, char32_t b) {
    return kb.entries_.at(a).frequency_rank < kb.entries_.at(b).frequency_rank;
  };
  for (auto& [syl, list] : kb.homophone_index_) {
    std::sort(list.begin(), list.end(), by_rank);
  }
  for (auto& [syl, list] : kb.primary_by_syllable_) {
    std::sort(list.begin(), list.end(), by_rank);
  }
  // Closest stroke count first; the file order breaks ties.
  for (auto& [ch, list] : kb.visual_index_) {
    const auto& self = kb.entries_.at(ch);
    auto distance = [&](char32_t n) {
      const auto& other = kb.entries_.at(n);
      if (!self.stroke_count || !other.stroke_count) return 0;
      return std::abs(*self.stroke_count - *other.stroke_count);
    };
    std::stable_sort(list.begin(), list.end(), [&](char32_t a, char32_t b) {
      return distance(a) < distance(b);
    });
  }
  return kb;
}

const CharEntry* CharacterKnowledgeBase::Find(char32_t ch) const {
  auto it = entries_.find(ch);
  return it == entries_.end() ? nullptr : &it->second;
}

const CharEntry& CharacterKnowledgeBase::At(char32_t ch) const {
  const CharEntry* e = Find(ch);
  if (e == nullptr) throw UnknownCharError(ch, std::nullopt);
  return *e;
}

std::u32string CharacterKnowledgeBase::Decompose(char32_t ch) const {
  return At(ch).decomposition;
}

std::vector<PinyinToken> CharacterKnowledgeBase::PinyinOf(
    std::string_view text) const {
  return PinyinOf(utf8::Decode(text));
}

std::vector<PinyinToken> CharacterKnowledgeBase::PinyinOf(
    std::u32string_view text) const {
  std::vector<PinyinToken> out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (!utf8::IsCjk(text[i])) continue;
    const CharEntry* e = Find(text[i]);
    if (e == nullptr) throw UnknownCharError(text[i], i);
    out.push_back({i, text[i], e->primary()});
  }
  return out;
}

char32_t CharacterKnowledgeBase::ToTraditional(char32_t ch) const {
  const CharEntry& e = At(ch);
  return e.traditional.value_or(ch);
}

std::optional<char32_t> CharacterKnowledgeBase::ToSimplified(
    char32_t trad) const {
  auto it = trad_to_simp_.find(trad);
  if (it == trad_to_simp_.end()) return std::nullopt;
  return it->second;
}

std::vector<char32_t> CharacterKnowledgeBase::VisualNeighbors(char32_t ch,
                                                              size_t k) const {
  At(ch);
  auto it = visual_index_.find(ch);
  if (it == visual_index_.end()) return {};
  const auto& list = it->second;
  return {list.begin(), list.begin() + std::min(k, list.size())};
}

std::vector<std::u32string> CharacterKnowledgeBase::Homophones(
    std::u32string_view word, size_t limit) const {
  if (word.empty() || limit == 0) return {};
  const int64_t n = static_cast<int64_t>(word.size());
  // Lexicographic weights folded into one integer: every kept position costs
  // more than all tone mismatches, which cost more than any rank sum.
  const int64_t tone_weight = (static_cast<int64_t>(max_rank_) + 1) * (n + 1);
  const int64_t keep_weight = tone_weight * (n + 1);

  struct Option {
    char32_t ch;
    int64_t weight;
  };
  std::vector<std::vector<Option>> options(word.size());
  for (size_t i = 0; i < word.size(); ++i) {
    const CharEntry* e = Find(word[i]);
    if (e == nullptr) throw UnknownCharError(word[i], i);
    auto it = primary_by_syllable_.find(e->primary().Toneless());
    for (char32_t c : it->second) {
      const CharEntry& cand = entries_.at(c);
      int64_t w = cand.frequency_rank;
      if (c == word[i]) w += keep_weight;
      if (cand.primary().tone != e->primary().tone) w += tone_weight;
      options[i].push_back({c, w});
    }
    std::sort(options[i].begin(), options[i].end(),
              [](const Option& a, const Option& b) {
                return std::tie(a.weight, a.ch) < std::tie(b.weight, b.ch);
              });
  }

  // Best-first enumeration over index vectors; pop until `limit` candidates
  // are held and the next weight is strictly worse than the last taken.
  using State = std::vector<uint32_t>;
  auto weight_of = [&](const State& s) {
    int64_t w = 0;
    for (size_t i = 0; i < s.size(); ++i) w += options[i][s[i]].weight;
    return w;
  };
  auto text_of = [&](const State& s) {
    std::u32string t;
    for (size_t i = 0; i < s.size(); ++i) t.push_back(options[i][s[i]].ch);
    return t;
  };
  using Item = std::pair<int64_t, State>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  std::set<State> seen;
  State start(word.size(), 0);
  heap.push({weight_of(start), start});
  seen.insert(start);

  std::vector<std::pair<int64_t, std::u32string>> found;
  while (!heap.empty()) {
    auto [w, s] = heap.top();
    if (found.size() >= limit && w > found.back().first) break;
    heap.pop();
    std::u32string t = text_of(s);
    if (t != word) found.emplace_back(w, std::move(t));
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] + 1 >= options[i].size()) continue;
      State next = s;
      ++next[i];
      if (seen.insert(next).second) heap.push({weight_of(next), next});
    }
  }
  std::sort(found.begin(), found.end());
  if (found.size() > limit) found.resize(limit);
  std::vector<std::u32string> out;
  out.reserve(found.size());
  for (auto& [w, t] : found) out.push_back(std::move(t));
  return out;
}

std::vector<EmojiCandidate> CharacterKnowledgeBase::EmojiFor(
    std::u32string_view unit) const {
  if (unit.empty()) return {};
  if (auto it = emoji_index_.find(std::u32string(unit));
      it != emoji_index_.end()) {
    return it->second;
  }
  if (unit.size() == 1) return {};
  std::string composed;
  std::optional<EmojiProvenance> prov;
  for (char32_t c : unit) {
    auto it = emoji_index_.find(std::u32string(1, c));
    if (it == emoji_index_.end()) return {};
    const EmojiCandidate& top = it->second.front();
    composed += top.emoji;
    if (!prov) {
      prov = top.provenance;
    } else if (*prov != top.provenance) {
      prov = EmojiProvenance::kMixed;
    }
  }
  return {{composed, *prov}};
}

std::string CharacterKnowledgeBase::CanonicalDump() const {
  std::ostringstream out;
  for (const auto& [ch, e] : entries_) {
    out << "E " << utf8::Encode(ch) << ' ' << utf8::Encode(e.decomposition)
        << ' ';
    for (const Syllable& s : e.pinyin) out << s.ToString() << ';';
    out << ' ' << (e.traditional ? utf8::Encode(*e.traditional) : "-") << ' '
        << e.frequency_rank << ' ' << e.stroke_count.value_or(0) << ' '
        << e.is_simplified << '\n';
  }
  for (const auto& [ch, list] : visual_index_) {
    out << "V " << utf8::Encode(ch) << ' '
        << utf8::Encode(std::u32string(list.begin(), list.end())) << '\n';
  }
  for (const auto& [syl, list] : homophone_index_) {
    out << "H " << syl << ' '
        << utf8::Encode(std::u32string(list.begin(), list.end())) << '\n';
  }
  for (const auto& [unit, list] : emoji_index_) {
    out << "M " << utf8::Encode(unit);
    for (const auto& c : list) {
      out << ' ' << c.emoji << '/' << ProvenanceName(c.provenance);
    }
    out << '\n';
  }
  for (const auto& [split, ch] : reverse_split_index_) {
    out << "R " << utf8::Encode(split) << ' ' << utf8::Encode(ch) << '\n';
  }
  return out.str();
}

}  // namespace forge
