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

#include <gtest/gtest.h>

namespace forge {
namespace {

TEST(ParseConfigTest, ReadsDefaultsAndEndpoints) {
  const FileConfig c = ParseConfig(
      "[forge]\n"
      "tables = data/tables\n"
      "seed = 7\n"
      "\n"
      "[endpoint:small]\n"
      "base_url = https://api.example.com/v1\n"
      "model = small-2024\n"
      "auth_env = EXAMPLE_TOKEN\n"
      "max_concurrent = 8\n"
      "retries = 5\n"
      "timeout = 30\n",
      "forge.ini");
  EXPECT_EQ(c.Get("tables"), "data/tables");
  EXPECT_EQ(c.Get("seed"), "7");
  EXPECT_FALSE(c.Get("corpus").has_value());
  ASSERT_EQ(c.endpoints.count("small"), 1u);
  const EndpointConfig& e = c.endpoints.at("small");
  EXPECT_EQ(e.name, "small");
  EXPECT_EQ(e.base_url, "https://api.example.com/v1");
  EXPECT_EQ(e.model_id, "small-2024");
  EXPECT_EQ(e.auth_env, "EXAMPLE_TOKEN");
  EXPECT_EQ(e.max_concurrent, 8);
  EXPECT_EQ(e.retries, 5);
  EXPECT_EQ(e.timeout_seconds, 30);
}

TEST(ParseConfigTest, EndpointDefaults) {
  const FileConfig c =
      ParseConfig("[endpoint:x]\nbase_url = http://localhost:1\n", "f.ini");
  const EndpointConfig& e = c.endpoints.at("x");
  EXPECT_EQ(e.model_id, "x");
  EXPECT_EQ(e.max_concurrent, 4);
  EXPECT_EQ(e.retries, 3);
}

TEST(ParseConfigTest, RejectsSecrets) {
  EXPECT_THROW(ParseConfig("[endpoint:x]\napi_key = sk-123\n", "f"),
               ValidationError);
  EXPECT_THROW(ParseConfig("[forge]\ntoken = abc\n", "f"), ValidationError);
  EXPECT_THROW(ParseConfig("[endpoint:x]\npassword = p\n", "f"),
               ValidationError);
}

TEST(ParseConfigTest, RejectsUnknownOrMalformedEntries) {
  EXPECT_THROW(ParseConfig("[forge]\ncolour = blue\n", "f"), ValidationError);
  EXPECT_THROW(ParseConfig("[other]\nx = 1\n", "f"), ValidationError);
  EXPECT_THROW(ParseConfig("[endpoint:x]\nmax_concurrent = many\n", "f"),
               ValidationError);
  EXPECT_THROW(ParseConfig("[endpoint:x]\nmax_concurrent = 0\n", "f"),
               ValidationError);
  EXPECT_THROW(ParseConfig("[forge\nx = 1\n", "f"), ValidationError);
}

}  // namespace
}  // namespace forge
