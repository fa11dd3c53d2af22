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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "forge/chat.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "forge/hash.h"
#include "forge/rng.h"
#include "httplib.h"
#include "json.hpp"

namespace forge {
namespace {

using nlohmann::json;

json MessagesJson(const std::vector<Message>& messages) {
  json arr = json::array();
  for (const Message& m : messages) {
    arr.push_back({{"role", m.role}, {"content", m.content}});
  }
  return arr;
}

// Splits "https://host:port/v1" into ("https://host:port", "/v1").
std::pair<std::string, std::string> SplitUrl(const std::string& url) {
  const size_t scheme = url.find("://");
  const size_t path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

}  // namespace

std::string ChatRequestBody(const EndpointConfig& endpoint,
                            const std::vector<Message>& messages,
                            const GenConfig& gen) {
  json body = {{"model", endpoint.model_id},
               {"messages", MessagesJson(messages)},
               {"temperature", gen.temperature},
               {"top_p", gen.top_p}};
  return body.dump();
}

std::string HttpChatBackend::Complete(const EndpointConfig& endpoint,
                                      const std::vector<Message>& messages,
                                      const GenConfig& gen,
                                      const RequestContext&) {
  if (endpoint.base_url.empty()) {
    throw Error("endpoint '" + endpoint.name + "' has no base_url");
  }
  httplib::Headers headers;
  if (!endpoint.auth_env.empty()) {
    const char* token = std::getenv(endpoint.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw Error("environment variable " + endpoint.auth_env +
                  " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  const auto [origin, prefix] = SplitUrl(endpoint.base_url);
  httplib::Client client(origin);
  client.set_connection_timeout(endpoint.timeout_seconds, 0);
  client.set_read_timeout(endpoint.timeout_seconds, 0);
  client.set_write_timeout(endpoint.timeout_seconds, 0);
  const auto res = client.Post(prefix + "/chat/completions", headers,
                               ChatRequestBody(endpoint, messages, gen),
                               "application/json");
  if (!res) {
    throw TransientError("request to " + endpoint.name + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransientError("HTTP " + std::to_string(res->status) + " from " +
                         endpoint.name);
  }
  if (res->status != 200) {
    throw Error("HTTP " + std::to_string(res->status) + " from " +
                endpoint.name + ": " + res->body.substr(0, 200));
  }
  try {
    const json j = json::parse(res->body);
    const json& content = j.at("choices").at(0).at("message").at("content");
    return content.is_string() ? content.get<std::string>() : "";
  } catch (const json::exception& e) {
    throw Error("malformed response from " + endpoint.name + ": " + e.what());
  }
}

ScriptedBackend::ScriptedBackend(std::map<std::string, std::string> replies)
    : replies_(std::move(replies)) {
  std::string all;
  for (const auto& [id, reply] : replies_) all += id + '\t' + reply + '\n';
  checksum_ = Sha256Hex(all);
}

ScriptedBackend::ScriptedBackend(const ScriptedBackend& other)
    : replies_(other.replies_), checksum_(other.checksum_) {}

ScriptedBackend ScriptedBackend::FromFile(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::map<std::string, std::string> replies;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      replies[j.at("sample_id").get<std::string>()] =
          j.at("reply").get<std::string>();
    } catch (const json::exception& e) {
      throw ValidationError(path.filename().string() + ":" +
                            std::to_string(line_no) + ": " + e.what());
    }
  }
  return ScriptedBackend(std::move(replies));
}

std::string ScriptedBackend::Complete(const EndpointConfig&,
                                      const std::vector<Message>&,
                                      const GenConfig&,
                                      const RequestContext& ctx) {
  ++calls_;
  auto it = replies_.find(ctx.sample_id);
  if (it == replies_.end()) it = replies_.find("*");
  if (it == replies_.end()) {
    throw Error("mock script has no reply for sample '" + ctx.sample_id + "'");
  }
  return it->second;
}

std::string ScriptedBackend::CacheSalt(const RequestContext& ctx) const {
  return "mock:" + checksum_ + ":" + ctx.sample_id;
}

ChatClient::ChatClient(ChatBackend& backend,
                       std::optional<std::filesystem::path> cache_dir,
                       uint64_t jitter_seed, Sleeper sleeper)
    : backend_(backend),
      cache_dir_(std::move(cache_dir)),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](int ms) {
                           std::this_thread::sleep_for(
                               std::chrono::milliseconds(ms));
                         })),
      rng_state_(jitter_seed) {}

std::string ChatClient::CacheKey(const EndpointConfig& endpoint,
                                 const std::vector<Message>& messages,
                                 const GenConfig& gen,
                                 const RequestContext& ctx) const {
  // nlohmann::json objects keep keys sorted, so dump() is canonical.
  const json key = {{"base_url", endpoint.base_url},
                    {"model", endpoint.model_id},
                    {"messages", MessagesJson(messages)},
                    {"temperature", gen.temperature},
                    {"top_p", gen.top_p},
                    {"salt", backend_.CacheSalt(ctx)}};
  return Sha256Hex(key.dump());
}

int ChatClient::BackoffMs(int attempt, const RetryPolicy& policy) {
  const int64_t ceiling = std::min<int64_t>(
      policy.max_delay_ms,
      static_cast<int64_t>(policy.base_delay_ms) << std::min(attempt, 20));
  std::lock_guard<std::mutex> lock(rng_mu_);
  SplitMix64 g(rng_state_);
  rng_state_ = g.Next();
  // Half fixed, half jitter.
  return static_cast<int>(ceiling / 2 +
                          static_cast<int64_t>(g.Below(ceiling / 2 + 1)));
}

std::string ChatClient::Query(const EndpointConfig& endpoint,
                              const std::vector<Message>& messages,
                              const GenConfig& gen,
                              const RequestContext& ctx) {
  std::filesystem::path cache_file;
  if (cache_dir_) {
    const std::string key = CacheKey(endpoint, messages, gen, ctx);
    cache_file = *cache_dir_ / key.substr(0, 2) / (key + ".json");
    if (std::filesystem::exists(cache_file)) {
      try {
        const json cached = json::parse(ReadFile(cache_file));
        ++cache_hits_;
        return cached.at("reply").get<std::string>();
      } catch (const std::exception&) {
        // Unreadable entry: fall through and overwrite it.
      }
    }
  }
  RetryPolicy policy;
  policy.retries = std::max(0, endpoint.retries);
  std::string last_error;
  for (int attempt = 0; attempt <= policy.retries; ++attempt) {
    if (attempt > 0) sleeper_(BackoffMs(attempt - 1, policy));
    try {
      ++backend_calls_;
      std::string reply = backend_.Complete(endpoint, messages, gen, ctx);
      if (cache_dir_) {
        const json entry = {{"model", endpoint.model_id}, {"reply", reply}};
        WriteFileAtomic(cache_file, entry.dump());
      }
      return reply;
    } catch (const TransientError& e) {
      last_error = e.what();
    }
  }
  throw Error("giving up on " + endpoint.name + " after " +
              std::to_string(policy.retries + 1) + " attempts: " + last_error);
}

}  // namespace forge
