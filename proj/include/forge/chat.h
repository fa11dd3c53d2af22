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

// Chat-completion backends and the caching, retrying client in front of
// them. One wire contract (POST {base_url}/chat/completions) covers every
// configured endpoint; a scripted backend replaces the network in tests.

#ifndef FORGE_CHAT_H_
#define FORGE_CHAT_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "forge/error.h"
#include "forge/prompts.h"

namespace forge {

struct EndpointConfig {
  std::string name;
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string model_id;
  std::string auth_env;  // name of the env var holding the bearer token
  int max_concurrent = 4;
  int retries = 3;
  int timeout_seconds = 60;
};

struct GenConfig {
  double temperature = 0.0;
  double top_p = 1.0;
};

struct RequestContext {
  std::string sample_id;
};

// Retryable failure: network error, timeout, HTTP 429 or 5xx.
class TransientError : public Error {
 public:
  using Error::Error;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string Complete(const EndpointConfig& endpoint,
                               const std::vector<Message>& messages,
                               const GenConfig& gen,
                               const RequestContext& ctx) = 0;
  // Extra cache-key material for backends whose reply does not depend on
  // the messages alone.
  virtual std::string CacheSalt(const RequestContext&) const { return ""; }
};

// The JSON body sent to the endpoint.
std::string ChatRequestBody(const EndpointConfig& endpoint,
                            const std::vector<Message>& messages,
                            const GenConfig& gen);

class HttpChatBackend : public ChatBackend {
 public:
  std::string Complete(const EndpointConfig& endpoint,
                       const std::vector<Message>& messages,
                       const GenConfig& gen,
                       const RequestContext& ctx) override;
};

// Replies from a JSON Lines script of {"sample_id": ..., "reply": ...};
// the id "*" is the default reply. Thread-safe.
class ScriptedBackend : public ChatBackend {
 public:
  static ScriptedBackend FromFile(const std::filesystem::path& path);
  explicit ScriptedBackend(std::map<std::string, std::string> replies);
  ScriptedBackend(const ScriptedBackend& other);

  std::string Complete(const EndpointConfig& endpoint,
                       const std::vector<Message>& messages,
                       const GenConfig& gen,
                       const RequestContext& ctx) override;
  std::string CacheSalt(const RequestContext& ctx) const override;

  size_t calls() const { return calls_.load(); }
  const std::string& checksum() const { return checksum_; }

 private:
  std::map<std::string, std::string> replies_;
  std::string checksum_;
  std::atomic<size_t> calls_{0};
};

struct RetryPolicy {
  int retries = 3;            // attempts after the first
  int base_delay_ms = 500;    // doubled per attempt
  int max_delay_ms = 30000;
};

// Content-addressed cache plus retries with jittered exponential backoff.
class ChatClient {
 public:
  using Sleeper = std::function<void(int milliseconds)>;

  ChatClient(ChatBackend& backend, std::optional<std::filesystem::path> cache_dir,
             uint64_t jitter_seed = 0, Sleeper sleeper = nullptr);

  // Throws Error when every attempt failed or on a non-retryable failure.
  std::string Query(const EndpointConfig& endpoint,
                    const std::vector<Message>& messages, const GenConfig& gen,
                    const RequestContext& ctx);

  std::string CacheKey(const EndpointConfig& endpoint,
                       const std::vector<Message>& messages,
                       const GenConfig& gen, const RequestContext& ctx) const;

  size_t cache_hits() const { return cache_hits_.load(); }
  size_t backend_calls() const { return backend_calls_.load(); }

 private:
  int BackoffMs(int attempt, const RetryPolicy& policy);

  ChatBackend& backend_;
  std::optional<std::filesystem::path> cache_dir_;
  Sleeper sleeper_;
  std::mutex rng_mu_;
  uint64_t rng_state_;
  std::atomic<size_t> cache_hits_{0};
  std::atomic<size_t> backend_calls_{0};
};

}  // namespace forge

#endif  // FORGE_CHAT_H_
