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

#ifndef FORGE_TESTS_TEST_SUPPORT_H_
#define FORGE_TESTS_TEST_SUPPORT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "forge/char_kb.h"

namespace forge::testing {

std::filesystem::path DataDir();
// Fixtures that only tests use (tests/data).
std::filesystem::path TestDataDir();

// The shipped tables, loaded once per process.
const CharacterKnowledgeBase& ShippedKb();

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path Write(const std::string& name,
                              std::string_view contents) const;

 private:
  std::filesystem::path path_;
};

std::u32string U32(std::string_view utf8_text);
std::string U8(std::u32string_view text);

}  // namespace forge::testing

#endif  // FORGE_TESTS_TEST_SUPPORT_H_
