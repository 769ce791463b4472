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

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rulegraph/engine.hpp"
#include "rulegraph/provider.hpp"

namespace rulegraph {

struct ProviderSettings {
  enum class Kind { kMock, kLive };
  Kind kind = Kind::kMock;
  std::string script_path;  // mock
  LiveProviderOptions live;
  std::string api_key_env = "RULEGRAPH_API_KEY";
};

struct AppConfig {
  RunConfig run;
  ProviderSettings provider;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();

// Schema in docs/config.md. Relative paths resolve against `base_dir`.
// Unknown keys are rejected. Throws Error(kInvalidConfig).
AppConfig config_from_json(const json& doc, const std::filesystem::path& base_dir);
AppConfig load_config(const std::string& path);

// RULEGRAPH_BASE_URL, RULEGRAPH_MODEL and the key variable named by
// api_key_env (falling back to OPENAI_API_KEY) override the file.
void apply_env(AppConfig& config, const EnvLookup& env);

std::unique_ptr<Provider> make_provider(const ProviderSettings& settings);

}  // namespace rulegraph
