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

#include "test_support.h"

#include <atomic>
#include <fstream>
#include <random>

#include "forge/utf8.h"

namespace forge::testing {

std::filesystem::path DataDir() { return FORGE_DATA_DIR; }

std::filesystem::path TestDataDir() { return FORGE_TEST_DATA_DIR; }

const CharacterKnowledgeBase& ShippedKb() {
  static const CharacterKnowledgeBase kb =
      CharacterKnowledgeBase::LoadDirectory(DataDir() / "tables");
  return kb;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("forge_test_" + std::to_string(rd()) + "_" +
           std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path TempDir::Write(const std::string& name,
                                     std::string_view contents) const {
  const std::filesystem::path p = path_ / name;
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << contents;
  return p;
}

std::u32string U32(std::string_view utf8_text) {
  return utf8::Decode(utf8_text);
}

std::string U8(std::u32string_view text) { return utf8::Encode(text); }

}  // namespace forge::testing
