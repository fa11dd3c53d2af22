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

#include "forge/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <set>
#include <sstream>

#include "forge/hash.h"

namespace forge {
namespace {

namespace pt = boost::property_tree;

const std::set<std::string>& SettingKeys() {
  static const auto* kKeys = new std::set<std::string>{
      "tables",   "corpus",  "lexicon",  "prompts", "cache_dir",
      "seed",     "rate",    "template", "mr_k",    "max_failure_fraction",
      "toxic_n",  "nontoxic_n"};
  return *kKeys;
}

int PositiveInt(const std::string& value, const std::string& where) {
  try {
    size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used == value.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(where + " must be a non-negative integer, got '" +
                        value + "'");
}

}  // namespace

std::optional<std::string> FileConfig::Get(const std::string& key) const {
  auto it = settings.find(key);
  if (it == settings.end()) return std::nullopt;
  return it->second;
}

FileConfig ParseConfig(const std::string& text, const std::string& file_name) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(file_name + ":" + std::to_string(e.line()) + ": " +
                          e.message());
  }
  FileConfig config;
  for (const auto& [section, body] : tree) {
    const std::string where = file_name + " [" + section + "]";
    for (const auto& [key, value] : body) {
      const std::string lower = [&] {
        std::string s = key;
        for (char& c : s) c = static_cast<char>(std::tolower(c));
        return s;
      }();
      if (lower.find("key") != std::string::npos ||
          lower.find("token") != std::string::npos ||
          lower.find("secret") != std::string::npos ||
          lower.find("password") != std::string::npos) {
        throw ValidationError(where + ": '" + key +
                              "' looks like a secret; put it in an "
                              "environment variable and name it via auth_env");
      }
    }
    if (section == "forge") {
      for (const auto& [key, value] : body) {
        if (!SettingKeys().count(key)) {
          throw ValidationError(where + ": unknown key '" + key + "'");
        }
        config.settings[key] = value.data();
      }
    } else if (section.rfind("endpoint:", 0) == 0 && section.size() > 9) {
      EndpointConfig e;
      e.name = section.substr(9);
      e.model_id = e.name;
      for (const auto& [key, value] : body) {
        const std::string v = value.data();
        const std::string at = where + " " + key;
        if (key == "base_url") {
          e.base_url = v;
        } else if (key == "model") {
          e.model_id = v;
        } else if (key == "auth_env") {
          e.auth_env = v;
        } else if (key == "max_concurrent") {
          e.max_concurrent = PositiveInt(v, at);
        } else if (key == "retries") {
          e.retries = PositiveInt(v, at);
        } else if (key == "timeout") {
          e.timeout_seconds = PositiveInt(v, at);
        } else {
          throw ValidationError(where + ": unknown key '" + key + "'");
        }
      }
      if (e.max_concurrent < 1) {
        throw ValidationError(where + ": max_concurrent must be at least 1");
      }
      config.endpoints[e.name] = e;
    } else {
      throw ValidationError(file_name + ": unknown section [" + section + "]");
    }
  }
  return config;
}

FileConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfig(ReadFile(path), path.filename().string());
}

}  // namespace forge
