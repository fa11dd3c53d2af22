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

// Run configuration file: INI with a [forge] section of defaults and one
// [endpoint:NAME] section per model endpoint. Secrets never live here; an
// endpoint names the environment variable that holds its token.
//
//   [forge]
//   tables = data/tables
//   cache_dir = .forge-cache
//   seed = 7
//
//   [endpoint:small-model]
//   base_url = https://api.openai.com/v1
//   model = small-model
//   auth_env = OPENAI_API_KEY
//   max_concurrent = 8

#ifndef FORGE_CONFIG_H_
#define FORGE_CONFIG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "forge/chat.h"

namespace forge {

struct FileConfig {
  std::map<std::string, std::string> settings;  // [forge] keys
  std::map<std::string, EndpointConfig> endpoints;

  std::optional<std::string> Get(const std::string& key) const;
};

// Throws ValidationError for unknown sections or keys, bad numbers, or
// secret-looking keys.
FileConfig LoadConfig(const std::filesystem::path& path);
FileConfig ParseConfig(const std::string& text, const std::string& file_name);

}  // namespace forge

#endif  // FORGE_CONFIG_H_
