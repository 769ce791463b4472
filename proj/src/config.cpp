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

#include "rulegraph/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace rulegraph {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidConfig, what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) invalid("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    invalid(std::string("config key '") + key + "' has the wrong type");
  }
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal().string();
}

ProviderSettings provider_from_json(const json& doc, const std::filesystem::path& base) {
  if (!doc.is_object()) invalid("provider must be an object");
  reject_unknown(doc,
                 {"kind", "script", "base_url", "model", "api_key_env", "timeout_s",
                  "max_attempts", "initial_backoff_ms"},
                 "provider");
  ProviderSettings s;
  const std::string kind = get<std::string>(doc, "kind", "mock");
  if (kind == "mock") {
    s.kind = ProviderSettings::Kind::kMock;
  } else if (kind == "live") {
    s.kind = ProviderSettings::Kind::kLive;
  } else {
    invalid("provider.kind must be 'mock' or 'live'");
  }
  if (doc.contains("script")) s.script_path = resolve(base, get<std::string>(doc, "script", ""));
  s.live.base_url = get<std::string>(doc, "base_url", s.live.base_url);
  s.live.model = get<std::string>(doc, "model", s.live.model);
  s.api_key_env = get<std::string>(doc, "api_key_env", s.api_key_env);
  s.live.timeout = std::chrono::seconds(get<int>(doc, "timeout_s", 120));
  s.live.retry.max_attempts = get<int>(doc, "max_attempts", s.live.retry.max_attempts);
  s.live.retry.initial_backoff =
      std::chrono::milliseconds(get<int>(doc, "initial_backoff_ms", 500));
  if (s.live.retry.max_attempts < 1) invalid("provider.max_attempts must be >= 1");
  return s;
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
}

AppConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) invalid("config must be a JSON object");
  reject_unknown(doc,
                 {"provider", "k_rules", "max_reprocess", "max_depth", "max_chain",
                  "threshold", "cluster_mode", "synthesize", "concurrency", "run_id",
                  "catalog", "temperatures", "max_reasks", "deterministic"},
                 "config");
  AppConfig c;
  RunConfig& r = c.run;
  if (doc.contains("provider")) c.provider = provider_from_json(doc["provider"], base_dir);
  r.k_rules = get<int>(doc, "k_rules", r.k_rules);
  r.max_reprocess = get<int>(doc, "max_reprocess", r.max_reprocess);
  r.max_depth = get<int>(doc, "max_depth", r.max_depth);
  r.max_chain = get<int>(doc, "max_chain", r.max_chain);
  r.concurrency = get<int>(doc, "concurrency", r.concurrency);
  r.synthesize = get<bool>(doc, "synthesize", r.synthesize);
  r.deterministic = get<bool>(doc, "deterministic", r.deterministic);
  r.run_id = get<std::string>(doc, "run_id", r.run_id);
  r.agents.max_reasks = get<int>(doc, "max_reasks", r.agents.max_reasks);
  try {
    if (doc.contains("threshold")) {
      r.threshold = parse_label(get<std::string>(doc, "threshold", "ML"));
    }
  } catch (const Error& e) {
    invalid(std::string("threshold: ") + e.what());
  }
  if (doc.contains("cluster_mode")) {
    r.cluster_mode = parse_cluster_mode(get<std::string>(doc, "cluster_mode", ""));
  }
  if (doc.contains("catalog")) {
    const json& cat = doc["catalog"];
    r.catalog = cat.is_string() ? DomainCatalog::from_file(resolve(base_dir, cat.get<std::string>()))
                                : DomainCatalog::from_json(cat);
  }
  if (doc.contains("temperatures")) {
    const json& t = doc["temperatures"];
    if (!t.is_object()) invalid("temperatures must be an object keyed by role");
    for (const auto& [role, value] : t.items()) {
      if (!value.is_number()) invalid("temperature for " + role + " must be a number");
      r.agents.temperature[parse_role_kind(role)] = value.get<double>();
    }
  }
  r.validate();
  return c;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config " + path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) invalid("config " + path + " is not valid JSON");
  return config_from_json(doc, std::filesystem::path(path).parent_path());
}

void apply_env(AppConfig& config, const EnvLookup& env) {
  if (auto url = env("RULEGRAPH_BASE_URL")) config.provider.live.base_url = *url;
  if (auto model = env("RULEGRAPH_MODEL")) config.provider.live.model = *model;
  if (auto key = env(config.provider.api_key_env)) {
    config.provider.live.api_key = *key;
  } else if (auto fallback = env("OPENAI_API_KEY")) {
    config.provider.live.api_key = *fallback;
  }
}

std::unique_ptr<Provider> make_provider(const ProviderSettings& settings) {
  if (settings.kind == ProviderSettings::Kind::kLive) {
    return std::make_unique<LiveProvider>(settings.live);
  }
  if (settings.script_path.empty()) invalid("mock provider needs a script path");
  return std::make_unique<MockProvider>(MockProvider::from_file(settings.script_path));
}

}  // namespace rulegraph
