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

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "rulegraph/error.hpp"
#include "rulegraph/provider.hpp"

namespace rulegraph {
namespace {

// attempt > node > run, so an exact key beats every wildcard pattern.
int specificity(const ScriptEntry& e) {
  return (e.attempt ? 4 : 0) + (e.node_id ? 2 : 0) + (e.run_id ? 1 : 0);
}

bool matches(const ScriptEntry& e, const ContextKey& key) {
  return e.role == key.role && (!e.run_id || *e.run_id == key.run_id) &&
         (!e.node_id || *e.node_id == key.node_id) &&
         (!e.attempt || *e.attempt == key.attempt);
}

std::int64_t word_count(std::string_view text) {
  std::int64_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

ErrorKind simulated_error(const std::string& name) {
  if (name == "timeout") return ErrorKind::kTimeout;
  if (name == "rate_limited") return ErrorKind::kRateLimited;
  if (name == "transport_error") return ErrorKind::kTransportError;
  if (name == "provider_failure") return ErrorKind::kProviderFailure;
  throw Error(ErrorKind::kInvalidConfig, "unknown scripted error '" + name + "'");
}

}  // namespace

MockProvider::MockProvider(std::vector<ScriptEntry> entries)
    : entries_(std::move(entries)) {
  std::set<std::tuple<std::string, std::string, int, int>> seen;
  for (const ScriptEntry& e : entries_) {
    if (e.error) simulated_error(*e.error);
    auto selector = std::make_tuple(e.run_id.value_or("\x01*"),
                                    e.node_id.value_or("\x01*"),
                                    static_cast<int>(e.role), e.attempt.value_or(-1));
    if (!seen.insert(selector).second) {
      throw Error(ErrorKind::kInvalidConfig,
                  "duplicate script selector for role " +
                      std::string(to_string(e.role)));
    }
  }
}

MockProvider MockProvider::from_json(const json& script) {
  if (!script.is_object() || !script.contains("entries") ||
      !script["entries"].is_array()) {
    throw Error(ErrorKind::kInvalidConfig, "mock script needs an 'entries' array");
  }
  std::vector<ScriptEntry> entries;
  std::size_t index = 0;
  for (const json& j : script["entries"]) {
    const std::string where = "script entry " + std::to_string(index++);
    try {
      ScriptEntry e;
      e.role = parse_role_kind(j.at("role").get<std::string>());
      if (j.contains("run")) e.run_id = j["run"].get<std::string>();
      if (j.contains("node")) e.node_id = j["node"].get<std::string>();
      if (j.contains("attempt")) e.attempt = j["attempt"].get<int>();
      if (j.contains("error")) {
        e.error = j["error"].get<std::string>();
      } else if (j.contains("response")) {
        e.response = j["response"].get<std::string>();
      } else if (j.contains("document")) {
        e.response = j["document"].dump();
      } else {
        throw Error(ErrorKind::kInvalidConfig,
                    where + " needs response, document or error");
      }
      entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error(ErrorKind::kInvalidConfig, where + ": " + ex.what());
    }
  }
  return MockProvider(std::move(entries));
}

MockProvider MockProvider::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidConfig, "cannot open mock script " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json script = json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (script.is_discarded()) {
    throw Error(ErrorKind::kInvalidConfig, "mock script " + path + " is not JSON");
  }
  return from_json(script);
}

const ScriptEntry* MockProvider::lookup(const ContextKey& key) const {
  const ScriptEntry* best = nullptr;
  for (const ScriptEntry& e : entries_) {
    if (!matches(e, key)) continue;
    if (best == nullptr || specificity(e) > specificity(*best)) best = &e;
  }
  return best;
}

ProviderResponse MockProvider::complete(const ProviderRequest& request) {
  const ScriptEntry* entry = lookup(request.context_key);
  if (entry == nullptr) {
    throw Error(ErrorKind::kScriptMiss,
                "no script entry for " + request.context_key.str());
  }
  if (entry->error) {
    throw Error(simulated_error(*entry->error),
                "scripted " + *entry->error + " for " + request.context_key.str());
  }
  ProviderResponse response;
  response.raw_text = entry->response;
  response.token_usage.prompt_tokens =
      word_count(request.system_prompt) + word_count(request.rendered_prompt);
  response.token_usage.completion_tokens = word_count(entry->response);
  attach_parsed(response, request);
  return response;
}

}  // namespace rulegraph
