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

#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rulegraph/engine.hpp"
#include "rulegraph/provider.hpp"

namespace rulegraph::testing {

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);
std::string email_task();

MockProvider fixture_script(const std::string& name);

// Deterministic lexical-mode config for the email fixture.
RunConfig email_config(int concurrency = 4);

// Builders for scripted documents.
json plan_doc(const std::string& goal, const std::vector<std::pair<std::string, std::string>>& subtasks,
              const std::vector<std::pair<std::string, std::string>>& edges = {});
json rules_doc(const std::vector<std::pair<std::string, std::string>>& domain_labels);
json answer_doc(const std::string& answer);
json assessment_doc(const std::string& label, const std::string& diff = "");
json classification_doc(const std::string& scenario);

// Script entry with optional selectors; `doc` is dumped compactly.
ScriptEntry entry(RoleKind role, const json& doc, std::optional<NodeId> node = std::nullopt,
                  std::optional<int> attempt = std::nullopt);
ScriptEntry error_entry(RoleKind role, const std::string& error,
                        std::optional<NodeId> node = std::nullopt,
                        std::optional<int> attempt = std::nullopt);

// Script where every subtask is accepted on its first attempt: `n` planned
// star subtasks S1..Sn and a final answer.
std::vector<ScriptEntry> happy_script(int n, const std::string& final_answer = "final");

// Forwards to another provider and keeps a copy of every request.
class RecordingProvider final : public Provider {
 public:
  explicit RecordingProvider(Provider& inner) : inner_(inner) {}

  ProviderResponse complete(const ProviderRequest& request) override;
  bool is_live() const override { return inner_.is_live(); }

  std::vector<ProviderRequest> requests() const;
  std::vector<ProviderRequest> requests_for(RoleKind role) const;

 private:
  Provider& inner_;
  mutable std::mutex mu_;
  std::vector<ProviderRequest> requests_;
};

// Events of one kind, in trace order.
std::vector<const TraceEvent*> events_of(const std::vector<TraceEvent>& trace, EventKind kind);

// Trace lines with timestamps zeroed, joined by newlines.
std::string canonical_trace(std::vector<TraceEvent> trace);

}  // namespace rulegraph::testing
