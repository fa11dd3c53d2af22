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

// Per-character linguistic knowledge consumed by the perturbation strategies:
// single-level splits, readings, traditional forms, look-alike neighbors,
// homophones and emoji substitutes. Loaded once from three TSV tables and
// immutable afterwards, so any number of threads may query it.

#ifndef FORGE_CHAR_KB_H_
#define FORGE_CHAR_KB_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forge/error.h"
#include "forge/pinyin.h"

namespace forge {

struct CharEntry {
  char32_t ch = 0;
  std::u32string decomposition;  // empty for atomic characters
  std::vector<Syllable> pinyin;  // first entry is the primary reading
  std::optional<char32_t> traditional;
  int frequency_rank = 0;  // 1 = most common
  std::optional<int> stroke_count;
  bool is_simplified = false;  // has a distinct traditional form

  const Syllable& primary() const { return pinyin.front(); }
};

enum class EmojiProvenance { kHomophonic, kPictographic, kMixed };

struct EmojiCandidate {
  std::string emoji;
  EmojiProvenance provenance;
};

// One character of a pinyin_of() result; `offset` is the codepoint index of
// the character in the input, so skipped non-CJK positions stay visible.
struct PinyinToken {
  size_t offset = 0;
  char32_t ch = 0;
  Syllable syllable;
};

struct Violation {
  std::string file;
  int line = 0;    // 1-based; 0 when the violation is file-wide
  int column = 0;  // 1-based field index; 0 when not column-specific
  std::string message;

  std::string ToString() const;
};

class KbLoadError : public ValidationError {
 public:
  explicit KbLoadError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class UnknownCharError : public Error {
 public:
  UnknownCharError(char32_t ch, std::optional<size_t> offset);
  char32_t ch() const { return ch_; }

 private:
  char32_t ch_;
};

struct TablePaths {
  std::filesystem::path chars;
  std::filesystem::path visual;
  std::filesystem::path emoji;

  // chars.tsv, visual.tsv and emoji.tsv inside `dir`.
  static TablePaths InDirectory(const std::filesystem::path& dir);
};

class CharacterKnowledgeBase {
 public:
  // Parses and cross-validates all tables. Every violation found is
  // collected; if there is at least one, throws KbLoadError and nothing is
  // returned.
  static CharacterKnowledgeBase Load(const TablePaths& paths);
  static CharacterKnowledgeBase LoadDirectory(const std::filesystem::path& dir);

  size_t size() const { return entries_.size(); }
  size_t visual_rows() const { return visual_index_.size(); }
  size_t emoji_rows() const { return emoji_index_.size(); }

  const CharEntry* Find(char32_t ch) const;
  // Throws UnknownCharError.
  const CharEntry& At(char32_t ch) const;

  std::u32string Decompose(char32_t ch) const;

  // Primary reading of every CJK character in `text`; non-CJK codepoints are
  // skipped. Throws UnknownCharError naming the first unknown character and
  // its offset.
  std::vector<PinyinToken> PinyinOf(std::string_view text) const;
  std::vector<PinyinToken> PinyinOf(std::u32string_view text) const;

  char32_t ToTraditional(char32_t ch) const;
  // Inverse of the traditional column; nullopt if `trad` is not the
  // traditional form of any entry.
  std::optional<char32_t> ToSimplified(char32_t trad) const;

  // At most k neighbors, ranked by |stroke difference| and then by the
  // order in visual.tsv. Never contains `ch`.
  std::vector<char32_t> VisualNeighbors(char32_t ch, size_t k) const;

  // Same-sound replacements for `word`. Every candidate has the same toneless
  // primary-reading sequence and differs from `word`. Ranked by (positions
  // left unchanged, tone mismatches, summed frequency rank, codepoints).
  std::vector<std::u32string> Homophones(std::u32string_view word,
                                         size_t limit = 100) const;

  // Direct lexicon hit for the unit, else (multi-char units) the
  // concatenation of each character's top emoji when all characters have
  // one. Empty when nothing maps.
  std::vector<EmojiCandidate> EmojiFor(std::u32string_view unit) const;

  const std::map<std::u32string, char32_t>& reverse_split_index() const {
    return reverse_split_index_;
  }
  const std::map<std::string, std::vector<char32_t>>& homophone_index() const {
    return homophone_index_;
  }
  const std::map<char32_t, CharEntry>& entries() const { return entries_; }

  // Deterministic text dump of every index; equal dumps mean structurally
  // identical knowledge bases.
  std::string CanonicalDump() const;

 private:
  CharacterKnowledgeBase() = default;

  std::map<char32_t, CharEntry> entries_;
  std::map<char32_t, std::vector<char32_t>> visual_index_;
  std::map<std::string, std::vector<char32_t>> homophone_index_;
  std::map<std::u32string, std::vector<EmojiCandidate>> emoji_index_;
  std::map<std::u32string, char32_t> reverse_split_index_;
  std::unordered_map<char32_t, char32_t> trad_to_simp_;
  // Toneless syllable -> chars whose primary reading is that syllable,
  // ordered by frequency rank.
  std::unordered_map<std::string, std::vector<char32_t>> primary_by_syllable_;
  int max_rank_ = 0;
};

const char* ProvenanceName(EmojiProvenance p);

}  // namespace forge

#endif  // FORGE_CHAR_KB_H_
