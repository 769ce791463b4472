// Copyright 2026 The Rulegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rulegraph/results.hpp"
#include "rulegraph/structured.hpp"

namespace rulegraph {

enum class RoleKind {
  kPlanner,        // PA
  kDomainAnalyst,  // DAA
  kDomainExpert,   // DEA
  kFusionExpert,   // FEA
  kGlobalExpert,   // GEA
};

inline constexpr std::array<RoleKind, 5> kAllRoles = {
    RoleKind::kPlanner, RoleKind::kDomainAnalyst, RoleKind::kDomainExpert,
    RoleKind::kFusionExpert, RoleKind::kGlobalExpert};

// "PA", "DAA", "DEA", "FEA", "GEA".
std::string_view to_string(RoleKind role);
RoleKind parse_role_kind(std::string_view text);

// Identifies one logical provider call within a run. `attempt` counts calls
// per (node, role) and starts at 1.
struct ContextKey {
  std::string run_id;
  NodeId node_id;
  RoleKind role = RoleKind::kPlanner;
  int attempt = 1;

  std::string str() const;
  auto operator<=>(const ContextKey&) const = default;
};

struct ProviderRequest {
  RoleKind role = RoleKind::kPlanner;
  std::string system_prompt;
  std::string rendered_prompt;
  SchemaId response_schema = SchemaId::kPlan;
  double temperature = 0.0;
  ContextKey context_key;
};

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& other) {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    return *this;
  }
  bool operator==(const TokenUsage&) const = default;
};

struct ProviderResponse {
  std::string raw_text;
  std::optional<json> parsed;  // set only when raw_text validates
  TokenUsage token_usage;
  int transport_attempts = 1;
};

// Language-model boundary. Implementations must tolerate concurrent calls.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse complete(const ProviderRequest& request) = 0;
  // Live providers reach the network; deterministic runs refuse them.
  virtual bool is_live() const = 0;
};

// Sets `parsed` when the raw text validates against the request schema.
void attach_parsed(ProviderResponse& response, const ProviderRequest& request);

// ---------------------------------------------------------------------------
// Scripted provider

// One script entry. Unset selector fields are wildcards; the most specific
// matching entry wins (exact key, then node+role+attempt, role+attempt,
// node+role, role).
struct ScriptEntry {
  std::optional<std::string> run_id;
  std::optional<NodeId> node_id;
  RoleKind role = RoleKind::kPlanner;
  std::optional<int> attempt;
  std::string response;
  // Simulated provider error kind (e.g. "timeout"); response is ignored.
  std::optional<std::string> error;
};

class MockProvider final : public Provider {
 public:
  explicit MockProvider(std::vector<ScriptEntry> entries);

  // {"entries": [{"run", "node", "role", "attempt", "response" | "document"
  // | "error"}]}. "document" is a JSON value serialized compactly.
  static MockProvider from_json(const json& script);
  static MockProvider from_file(const std::string& path);

  // Throws Error(kScriptMiss) when no entry matches.
  ProviderResponse complete(const ProviderRequest& request) override;
  bool is_live() const override { return false; }

  const std::vector<ScriptEntry>& entries() const { return entries_; }

 private:
  const ScriptEntry* lookup(const ContextKey& key) const;
  std::vector<ScriptEntry> entries_;
};

// ---------------------------------------------------------------------------
// OpenAI-compatible chat-completions provider

struct HttpReply {
  int status = 0;
  std::string body;
};

// POST transport. Implementations throw Error(kTimeout) or
// Error(kTransportError) when no HTTP reply was received.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpReply post(const std::string& base_url, const std::string& path,
                         const std::string& body,
                         const std::map<std::string, std::string>& headers,
                         std::chrono::seconds timeout) = 0;
};

std::unique_ptr<HttpTransport> make_http_transport();

struct RetryPolicy {
  int max_attempts = 3;  // total transport attempts per logical call
  std::chrono::milliseconds initial_backoff{500};
  double backoff_multiplier = 2.0;
};

struct LiveProviderOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4";
  std::string api_key;
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

class LiveProvider final : public Provider {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit LiveProvider(LiveProviderOptions options,
                        std::unique_ptr<HttpTransport> transport = nullptr,
                        Sleeper sleeper = nullptr);

  // Retries timeouts, rate limits and transport errors per the retry
  // policy; other HTTP failures throw Error(kProviderFailure).
  ProviderResponse complete(const ProviderRequest& request) override;
  bool is_live() const override { return true; }

  // Request body for the chat-completions endpoint.
  json request_body(const ProviderRequest& request) const;

 private:
  LiveProviderOptions options_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

}  // namespace rulegraph
