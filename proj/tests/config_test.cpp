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

#include <gtest/gtest.h>

#include <map>

#include "testing/scripts.hpp"

namespace rulegraph {
namespace {

ErrorKind config_error(const json& doc) {
  try {
    config_from_json(doc, "/base");
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted " << doc.dump();
  return ErrorKind::kUnrecognizedLabel;
}

EnvLookup fake_env(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const std::string& name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

TEST(Config, DefaultsAndFields) {
  const AppConfig c = config_from_json(json{{"provider", {{"kind", "mock"}, {"script", "s.json"}}},
                                            {"k_rules", 2},
                                            {"threshold", "M"},
                                            {"cluster_mode", "model"},
                                            {"synthesize", true},
                                            {"temperatures", {{"DEA", 0.3}}}},
                                       "/base/dir");
  EXPECT_EQ(c.run.k_rules, 2);
  EXPECT_EQ(c.run.max_reprocess, 3);
  EXPECT_EQ(c.run.max_depth, 2);
  EXPECT_EQ(c.run.max_chain, 3);
  EXPECT_EQ(c.run.threshold, MembershipLabel::kM);
  EXPECT_EQ(c.run.cluster_mode, ClusterMode::kModel);
  EXPECT_TRUE(c.run.synthesize);
  EXPECT_DOUBLE_EQ(c.run.agents.temperature.at(RoleKind::kDomainExpert), 0.3);
  EXPECT_EQ(c.provider.kind, ProviderSettings::Kind::kMock);
  // Relative paths are taken from the config file's directory.
  EXPECT_EQ(c.provider.script_path, "/base/dir/s.json");

  const AppConfig d = config_from_json(json::object(), "/x");
  EXPECT_EQ(d.run.threshold, MembershipLabel::kML);
  EXPECT_EQ(d.run.cluster_mode, ClusterMode::kLexical);
  EXPECT_FALSE(d.run.synthesize);
}

TEST(Config, Rejections) {
  EXPECT_EQ(config_error({{"k_rule", 3}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"provider", {{"kind", "mock"}, {"scrpt", "x"}}}}),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"provider", {{"kind", "remote"}}}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"k_rules", "three"}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"k_rules", 0}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"threshold", "VH"}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"cluster_mode", "fuzzy"}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"temperatures", {{"XYZ", 0.1}}}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"temperatures", {{"PA", "hot"}}}}), ErrorKind::kInvalidConfig);
  EXPECT_EQ(config_error({{"catalog", {{"domains", json::array()}}}}), ErrorKind::kInvalidConfig);
}

TEST(Config, LoadFromFixtureFile) {
  const AppConfig c = load_config(testing::fixture_path("email_config.json"));
  EXPECT_EQ(c.run.run_id, "email");
  EXPECT_EQ(c.provider.script_path, testing::fixture_path("email_script.json"));
  EXPECT_NO_THROW(make_provider(c.provider));
  EXPECT_THROW(load_config(testing::fixture_path("missing.json")), Error);
}

TEST(Config, EnvironmentOverridesFile) {
  AppConfig c = config_from_json(
      {{"provider", {{"kind", "live"}, {"base_url", "http://file"}, {"model", "file-model"},
                     {"api_key_env", "MY_KEY"}}}},
      "/");
  apply_env(c, fake_env({{"RULEGRAPH_BASE_URL", "http://env"}, {"MY_KEY", "k1"},
                         {"OPENAI_API_KEY", "k2"}}));
  EXPECT_EQ(c.provider.live.base_url, "http://env");
  EXPECT_EQ(c.provider.live.model, "file-model");
  EXPECT_EQ(c.provider.live.api_key, "k1");

  AppConfig fallback;
  apply_env(fallback, fake_env({{"OPENAI_API_KEY", "k2"}, {"RULEGRAPH_MODEL", "m"}}));
  EXPECT_EQ(fallback.provider.live.api_key, "k2");
  EXPECT_EQ(fallback.provider.live.model, "m");
}

TEST(Config, MockWithoutScriptCannotBuildProvider) {
  EXPECT_THROW(make_provider(ProviderSettings{}), Error);
}

}  // namespace
}  // namespace rulegraph
